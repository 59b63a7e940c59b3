"""
app/commands/common.py
File I/O and output helpers shared by every subcommand.
"""

import json
import sys
from pathlib import Path
from typing import Optional, TypeVar

from pydantic import BaseModel

from core.grid import Instance, Schedule
from core.schemas import ScenarioModel, SolutionModel

M = TypeVar("M", bound=BaseModel)


def read_model(path: str, model: type[M]) -> M:
    """Parse a JSON file; malformed content raises pydantic.ValidationError."""
    return model.model_validate_json(Path(path).read_text(encoding="utf-8"))


def load_scenario(path: str) -> Instance:
    return read_model(path, ScenarioModel).to_domain()


def load_solution(path: str, inst: Instance) -> Schedule:
    return read_model(path, SolutionModel).to_domain(inst)


def write_model(model: BaseModel, out: Optional[str]) -> None:
    """Write to out, or to stdout when no path is given."""
    text = model.model_dump_json(indent=2, exclude_none=True)
    if out:
        path = Path(out)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text + "\n", encoding="utf-8")
    else:
        sys.stdout.write(text + "\n")


def emit(args, payload: dict, human: str) -> None:
    """Machine-readable payload under --json, the human summary otherwise."""
    if getattr(args, "json", False):
        sys.stdout.write(json.dumps(payload, indent=2, default=str) + "\n")
    else:
        sys.stdout.write(human.rstrip("\n") + "\n")
