"""
app/commands/dpaths.py
`cmpkit dpaths solve`: bounded-length disjoint paths.
"""

from app.commands.common import emit, read_model, write_model
from core.constants import EXIT_OK, EXIT_UNSOLVABLE
from core.schemas import PathInstanceModel, PathSolutionModel
from paths.disjoint import solve_disjoint


def cmd_solve(args) -> int:
    inst = read_model(args.instance, PathInstanceModel).to_domain()
    paths = solve_disjoint(inst, budget=args.budget)
    if paths is None:
        emit(args, {"solved": False}, "no disjoint paths within the length bound")
        return EXIT_UNSOLVABLE
    write_model(PathSolutionModel.from_domain(paths), args.output)
    return EXIT_OK


def register(sub) -> None:
    p = sub.add_parser("dpaths", help="Bounded-length disjoint paths")
    dp_sub = p.add_subparsers(dest="dpaths_command", required=True)
    s = dp_sub.add_parser("solve", help="Find pairwise disjoint paths of length at most d")
    s.add_argument("instance")
    s.add_argument("-o", "--output")
    s.add_argument("--budget", type=int, help="Search nodes before giving up")
    s.set_defaults(handler=cmd_solve)
