"""
app/commands/schedule.py
Subcommands that check or produce schedules: validate, solve, solve-length-fpt, construct.
"""

import logging

from analysis.turns import turn_count
from app.commands.common import emit, load_scenario, load_solution, write_model
from core.config import get_settings
from core.constants import EXIT_OK, EXIT_UNSOLVABLE
from core.exceptions import DelegatedToExact
from core.grid import ObjectiveKind, dist_min, traveled_length, validate_schedule
from core.schemas import BoundedSolutionModel, BoundReport, SolutionModel
from solvers.construct import construct_bounded_slack
from solvers.exact import solve_makespan, solve_total_length
from solvers.fpt import BranchStats, solve_length_fpt

logger = logging.getLogger(__name__)


def cmd_validate(args) -> int:
    inst = load_scenario(args.scenario)
    schedule = load_solution(args.solution, inst)
    report = validate_schedule(inst, schedule)
    violations = report.violations()
    human = "valid" if report.valid else "invalid\n" + "\n".join(f"  {k}: {v}" for k, v in violations.items())
    emit(args, {"valid": report.valid, "violations": violations}, human)
    return EXIT_OK if report.valid else EXIT_UNSOLVABLE


def _shortest_by_branching(inst, threads: int):
    """Smallest λ between dist_min and the scenario bound that the threaded brancher accepts."""
    for lam in range(dist_min(inst), inst.objective.bound + 1):
        schedule = solve_length_fpt(inst, lam=lam, threads=threads)
        if schedule is not None:
            return schedule
    return None


def cmd_solve(args) -> int:
    inst = load_scenario(args.scenario)
    budget = args.budget if args.budget is not None else get_settings().SEARCH_BUDGET
    threads = args.threads if args.threads is not None else 1
    length = inst.objective is not None and inst.objective.kind == ObjectiveKind.LENGTH
    if length and threads > 1:
        schedule = _shortest_by_branching(inst, threads)
    elif length:
        schedule = solve_total_length(inst, budget=budget)
    else:
        if threads > 1:
            logger.warning("solve: the makespan search is single-threaded, ignoring --threads %d", threads)
        schedule = solve_makespan(inst, budget=budget)
    if schedule is None:
        emit(args, {"solved": False}, "no schedule within the bound")
        return EXIT_UNSOLVABLE
    write_model(SolutionModel.from_domain(schedule), args.output)
    if args.output:
        emit(
            args,
            {"solved": True, "horizon": schedule.horizon, "total_length": traveled_length(schedule)},
            f"solved: horizon {schedule.horizon}, total length {traveled_length(schedule)} -> {args.output}",
        )
    return EXIT_OK


def cmd_solve_length_fpt(args) -> int:
    inst = load_scenario(args.scenario)
    threads = args.threads if args.threads is not None else get_settings().FPT_THREADS
    stats = BranchStats()
    schedule = solve_length_fpt(inst, lam=args.lam, threads=threads, stats=stats)
    if schedule is None:
        emit(args, {"solved": False, "nodes": stats.nodes}, f"no schedule within the bound ({stats.nodes} nodes)")
        return EXIT_UNSOLVABLE
    length = traveled_length(schedule)
    report = BoundReport(
        dist_min=dist_min(inst),
        total_length=length,
        overhead=length - dist_min(inst),
        turns=[turn_count(r) for r in schedule.routes],
    )
    model = BoundedSolutionModel(horizon=schedule.horizon, moves=[r.moves for r in schedule.routes], bound_report=report)
    write_model(model, args.output)
    return EXIT_OK


def cmd_construct(args) -> int:
    inst = load_scenario(args.scenario)
    try:
        schedule, cert = construct_bounded_slack(inst, budget=args.budget)
    except DelegatedToExact as exc:
        logger.warning("construct delegated to the exact solver: %s", exc)
        if exc.schedule is None:
            emit(args, {"solved": False, "delegated": True}, "delegated to the exact solver: no schedule")
            return EXIT_UNSOLVABLE
        schedule = exc.schedule
        length = traveled_length(schedule)
        report = BoundReport(
            dist_min=dist_min(inst),
            total_length=length,
            overhead=length - dist_min(inst),
            turns=[turn_count(r) for r in schedule.routes],
            delegated=True,
        )
    else:
        if schedule is None:
            emit(args, {"solved": False, "case": cert.case}, "start and target orders differ on a single line")
            return EXIT_UNSOLVABLE
        report = BoundReport.from_certified(cert)
    model = BoundedSolutionModel(horizon=schedule.horizon, moves=[r.moves for r in schedule.routes], bound_report=report)
    write_model(model, args.output)
    return EXIT_OK


def register(sub) -> None:
    p = sub.add_parser("validate", help="Check a solution against its scenario")
    p.add_argument("scenario")
    p.add_argument("solution")
    p.set_defaults(handler=cmd_validate)

    p = sub.add_parser("solve", help="Exact solve under the scenario's objective")
    p.add_argument("scenario")
    p.add_argument("-o", "--output")
    p.add_argument("--budget", type=int, help="Expanded configurations before giving up")
    p.add_argument("--threads", type=int, help="Workers for length objectives (branching solver)")
    p.set_defaults(handler=cmd_solve)

    p = sub.add_parser("solve-length-fpt", help="Bounded total length by exhaustive branching")
    p.add_argument("scenario")
    p.add_argument("-o", "--output")
    p.add_argument("--lambda", dest="lam", type=int, help="Length bound (default: the scenario's)")
    p.add_argument("--threads", type=int)
    p.set_defaults(handler=cmd_solve_length_fpt)

    p = sub.add_parser("construct", help="Constructive bounded-slack schedule with certified bounds")
    p.add_argument("scenario")
    p.add_argument("-o", "--output")
    p.add_argument("--budget", type=int, help="Budget for delegation to the exact solver")
    p.set_defaults(handler=cmd_construct)
