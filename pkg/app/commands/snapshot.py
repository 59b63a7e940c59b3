"""
app/commands/snapshot.py
`cmpkit snapshot extract|reconstruct`.
"""

import logging

from app.commands.common import emit, load_scenario, load_solution, read_model, write_model
from core.constants import EXIT_OK, EXIT_UNSOLVABLE
from core.grid import ObjectiveKind
from core.schemas import SnapshotModel, SolutionModel
from snapshot.extract import extract_snapshot
from snapshot.organize import is_organized, organize
from snapshot.witness import check_witness, reconstruct

logger = logging.getLogger(__name__)


def cmd_extract(args) -> int:
    inst = load_scenario(args.scenario)
    schedule = load_solution(args.solution, inst)
    if not is_organized(inst, schedule):
        logger.info("snapshot extract: organizing the schedule first")
        schedule = organize(inst, schedule)
    snap, witness = extract_snapshot(inst, schedule)
    write_model(SnapshotModel.from_domain(snap, witness), args.output)
    return EXIT_OK


def cmd_reconstruct(args) -> int:
    inst = load_scenario(args.scenario)
    snap, witness = read_model(args.snapshot, SnapshotModel).to_domain()
    if inst.objective is not None and inst.objective.kind == ObjectiveKind.MAKESPAN:
        report = check_witness(inst, snap, witness, inst.objective.bound)
        if not report.ok:
            payload = {"ok": False, "violations": [{"family": v.family, "detail": v.detail} for v in report.violations]}
            emit(args, payload, "witness rejected:\n" + "\n".join(f"  {v.family}: {v.detail}" for v in report.violations))
            return EXIT_UNSOLVABLE
    write_model(SolutionModel.from_domain(reconstruct(inst, snap, witness)), args.output)
    return EXIT_OK


def register(sub) -> None:
    p = sub.add_parser("snapshot", help="Compress a schedule to a snapshot or expand one back")
    snap_sub = p.add_subparsers(dest="snapshot_command", required=True)

    e = snap_sub.add_parser("extract", help="Organize a schedule and write its snapshot and witness")
    e.add_argument("scenario")
    e.add_argument("solution")
    e.add_argument("-o", "--output")
    e.set_defaults(handler=cmd_extract)

    r = snap_sub.add_parser("reconstruct", help="Rebuild a schedule from a snapshot and witness")
    r.add_argument("scenario")
    r.add_argument("snapshot")
    r.add_argument("-o", "--output")
    r.set_defaults(handler=cmd_reconstruct)
