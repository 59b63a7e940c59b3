"""
app/main.py
Command-line entry point for cmpkit.
"""

import argparse
import json
import logging
import sys
from typing import Optional, Sequence

from pydantic import ValidationError

from app.commands import analyze, dpaths, reduce, schedule, snapshot, tools
from core.config import get_settings
from core.constants import EXIT_RESOURCE_LIMIT, EXIT_USAGE, SYSTEM_VERSION
from core.exceptions import CmpkitError, ResourceLimit, TooLarge

logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cmpkit", description="Coordinated motion planning on grids")
    parser.add_argument("--json", action="store_true", help="Machine-readable output and errors")
    parser.add_argument("--verbose", action="store_true", help="DEBUG logging")
    parser.add_argument("--version", action="version", version=SYSTEM_VERSION)
    sub = parser.add_subparsers(dest="command", required=True)
    for module in (schedule, analyze, snapshot, dpaths, reduce, tools):
        module.register(sub)
    return parser


def _fail(args, code: int, exc: Exception) -> int:
    if getattr(args, "json", False):
        sys.stderr.write(json.dumps({"error": type(exc).__name__, "message": str(exc), "exit_code": code}) + "\n")
    else:
        sys.stderr.write(f"cmpkit: {type(exc).__name__}: {exc}\n")
    return code


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else 0

    level = logging.DEBUG if args.verbose else getattr(logging, get_settings().LOG_LEVEL.upper(), logging.INFO)
    logging.basicConfig(level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s", stream=sys.stderr)

    try:
        return args.handler(args)
    except (ResourceLimit, TooLarge) as exc:
        return _fail(args, EXIT_RESOURCE_LIMIT, exc)
    except (ValidationError, ValueError, OSError, CmpkitError) as exc:
        return _fail(args, EXIT_USAGE, exc)


if __name__ == "__main__":
    sys.exit(main())
