"""
app/commands/tools.py
`cmpkit gen` and `cmpkit render`.
"""

from app.commands.common import emit, load_scenario, load_solution, write_model
from app.services.generator import gen_random
from app.services.render import render_svg
from core.config import get_settings
from core.constants import EXIT_OK
from core.grid import GridDims, Objective, ObjectiveKind
from core.schemas import ScenarioModel


def cmd_gen(args) -> int:
    seed = args.seed if args.seed is not None else get_settings().DEFAULT_SEED
    inst = gen_random(GridDims(args.width, args.height), args.k, seed)
    if args.objective:
        kind, _, bound = args.objective.partition(":")
        inst = inst.with_objective(Objective(ObjectiveKind(kind), int(bound)))
    write_model(ScenarioModel.from_domain(inst), args.output)
    return EXIT_OK


def cmd_render(args) -> int:
    inst = load_scenario(args.scenario)
    schedule = load_solution(args.solution, inst) if args.solution else None
    out = render_svg(inst, schedule, args.output)
    emit(args, {"svg": str(out)}, f"wrote {out}")
    return EXIT_OK


def register(sub) -> None:
    p = sub.add_parser("gen", help="Write a seeded random scenario")
    p.add_argument("--width", type=int, required=True)
    p.add_argument("--height", type=int, required=True)
    p.add_argument("-k", type=int, required=True, help="Number of robots")
    p.add_argument("--seed", type=int)
    p.add_argument("--objective", metavar="KIND:BOUND", help="e.g. makespan:12 or length:30")
    p.add_argument("-o", "--output")
    p.set_defaults(handler=cmd_gen)

    p = sub.add_parser("render", help="Static SVG of a scenario and optional solution")
    p.add_argument("scenario")
    p.add_argument("solution", nargs="?")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(handler=cmd_render)
