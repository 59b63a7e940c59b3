"""
app/commands/analyze.py
`cmpkit analyze`: per-robot slack, wait/travel split, turns, monotone runs and
good intervals of a schedule.
"""

import logging

import pandas as pd

from analysis.slack import good_intervals, wait_travel_slack
from analysis.turns import monotone_runs, turn_count
from app.commands.common import emit, load_scenario, load_solution
from core.constants import EXIT_OK
from core.exceptions import BadInterval
from core.grid import Instance, Schedule, dist_min, route_length, slack, traveled_length, validate_schedule
from core.schemas import AnalyzeReport, GoodIntervalModel, RobotMetrics

logger = logging.getLogger(__name__)


def build_report(
    inst: Instance,
    schedule: Schedule,
    interval: tuple[int, int] | None = None,
    good: tuple[int, int, int] | None = None,
) -> AnalyzeReport:
    t1, t2 = interval if interval is not None else (0, schedule.horizon)
    if not 0 <= t1 <= t2 <= schedule.horizon:
        raise BadInterval(f"interval [{t1}, {t2}] is not inside [0, {schedule.horizon}]")
    validation = validate_schedule(inst, schedule)

    robots = []
    for robot, route in zip(inst.robots, schedule.routes):
        wait, travel = wait_travel_slack(route, t1, t2)
        robots.append(RobotMetrics(
            id=robot.id,
            length=route_length(route),
            slack=slack(route, t1, t2),
            wait_slack=wait,
            travel_slack=travel,
            turns=turn_count(route, t1, t2),
            monotone_runs=len(monotone_runs(route, robot.id)),
        ))

    found = []
    if good is not None:
        sigma, gamma, d = good
        found = [
            GoodIntervalModel(interval=iv, small=sorted(part.small), large=sorted(part.large))
            for iv, part in good_intervals(schedule, sigma, gamma, d)
        ]

    return AnalyzeReport(
        valid=validation.valid,
        violations=validation.violations(),
        horizon=schedule.horizon,
        dist_min=dist_min(inst),
        total_length=traveled_length(schedule),
        interval=(t1, t2),
        robots=robots,
        good_intervals=found,
    )


def _human(report: AnalyzeReport) -> str:
    table = pd.DataFrame([r.model_dump() for r in report.robots]).set_index("id")
    lines = [
        f"valid: {report.valid}",
        f"horizon: {report.horizon}  total length: {report.total_length}  dist_min: {report.dist_min}",
        f"interval: {list(report.interval)}",
        table.to_string(),
    ]
    lines += [f"  {k}: {v}" for k, v in report.violations.items()]
    for g in report.good_intervals:
        lines.append(f"good interval {list(g.interval)}: small={g.small} large={g.large}")
    return "\n".join(lines)


def cmd_analyze(args) -> int:
    inst = load_scenario(args.scenario)
    schedule = load_solution(args.solution, inst)
    report = build_report(
        inst, schedule,
        tuple(args.interval) if args.interval else None,
        tuple(args.good_interval) if args.good_interval else None,
    )
    emit(args, report.model_dump(mode="json"), _human(report))
    return EXIT_OK


def register(sub) -> None:
    p = sub.add_parser("analyze", help="Slack, turn and interval metrics of a schedule")
    p.add_argument("scenario")
    p.add_argument("solution")
    p.add_argument("--interval", nargs=2, type=int, metavar=("A", "B"))
    p.add_argument("--good-interval", nargs=3, type=int, metavar=("SIGMA", "GAMMA", "D"))
    p.set_defaults(handler=cmd_analyze)
