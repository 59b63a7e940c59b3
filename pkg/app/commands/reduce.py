"""
app/commands/reduce.py
`cmpkit reduce`: compile a formula and its drawing into a hardness instance.
"""

import logging
from pathlib import Path

from app.commands.common import emit, read_model, write_model
from core.config import get_settings
from core.constants import EXIT_OK, EXIT_UNSOLVABLE
from core.schemas import DrawingModel, GadgetCheck, PathInstanceModel, ReductionModel, ScenarioModel
from reduction.cmpm import compile_cmpm, verify_arrow_gadget, verify_clause_gadget
from reduction.compile import compile_edp, compile_vdp
from reduction.formula import parse_dimacs
from reduction.gadgets import STANDARD_SHAPE, verify_clause_paths, verify_variable_gadget

logger = logging.getLogger(__name__)


def _parse_force(items: list[str] | None) -> dict[int, bool]:
    out = {}
    for item in items or []:
        name, _, value = item.partition("=")
        if not name.startswith("x") or value not in ("0", "1"):
            raise ValueError(f"--force expects xN=0 or xN=1, got {item!r}")
        out[int(name[1:])] = value == "1"
    return out


def gadget_checks(target: str) -> list[GadgetCheck]:
    checks = []
    if target in ("vdp", "edp"):
        for r in range(4):
            rep = verify_variable_gadget(STANDARD_SHAPE.a, STANDARD_SHAPE.b, r)
            checks.append(GadgetCheck(name=f"variable-gadget-r{r}", ok=rep.ok, detail={"lengths": rep.lengths}))
        clause = verify_clause_paths()
        checks.append(GadgetCheck(
            name="clause-paths",
            ok=clause.ok,
            detail={
                "families": {f.value: v for f, v in clause.families.items()},
                "solvable_when_closed": {
                    ",".join(sorted(f.value for f in closed)) or "-": ok
                    for closed, ok in clause.solvable_when_closed.items()
                },
            },
        ))
    else:
        clause = verify_clause_gadget()
        checks.append(GadgetCheck(
            name="clause-robot",
            ok=clause.ok,
            detail={
                "survivor_states": clause.survivor_states,
                "escapes": {s.value: v for s, v in clause.escapes_realized.items()},
                "canonical": {s.value: v for s, v in clause.canonical_realized.items()},
                "unescaped_reachable": clause.unescaped_reachable,
                "after_top_late": sorted(clause.after_top_late),
            },
        ))
        arrow = verify_arrow_gadget()
        checks.append(GadgetCheck(
            name="arrow",
            ok=arrow.ok,
            detail={"inside_box": len(arrow.inside_box), "horizontal": arrow.opens_horizontally, "down": arrow.opens_downward},
        ))
    return checks


def cmd_reduce(args) -> int:
    formula = parse_dimacs(Path(args.formula).read_text(encoding="utf-8"))
    drawing = read_model(args.drawing, DrawingModel).to_domain()
    factor = args.factor if args.factor is not None else get_settings().REFINEMENT_FACTOR

    if args.target == "cmpm":
        red = compile_cmpm(formula, drawing, factor, _parse_force(args.force))
        model = ReductionModel(
            target="cmpm",
            factor=factor,
            scenario=ScenarioModel.from_domain(red.instance),
            forced_routes={rid: r.moves for rid, r in red.forced.items()},
        )
    else:
        compile_fn = compile_vdp if args.target == "vdp" else compile_edp
        red = compile_fn(formula, drawing, factor, _parse_force(args.force))
        model = ReductionModel(target=args.target, factor=factor, path_instance=PathInstanceModel.from_domain(red.instance))

    if args.verify:
        model.checks = gadget_checks(args.target)
    write_model(model, args.output)
    failed = [c.name for c in model.checks if not c.ok]
    if args.verify:
        emit(
            args,
            {"checks": {c.name: c.ok for c in model.checks}},
            "gadget checks: " + ("all passed" if not failed else "FAILED " + ", ".join(failed)),
        )
    return EXIT_UNSOLVABLE if failed else EXIT_OK


def register(sub) -> None:
    p = sub.add_parser("reduce", help="Compile a 3-CNF formula and its drawing into a hardness instance")
    p.add_argument("--target", choices=["vdp", "edp", "cmpm"], required=True)
    p.add_argument("--formula", required=True, help="DIMACS CNF file")
    p.add_argument("--drawing", required=True, help="Orthogonal drawing JSON")
    p.add_argument("--factor", type=int, help="Refinement factor (default: REFINEMENT_FACTOR)")
    p.add_argument("--force", nargs="*", metavar="xN=0|1", help="Fix variables: blocks one loop arc (vdp/edp) or fixes connection robots (cmpm)")
    p.add_argument("--verify", action="store_true", help="Also run the gadget-level checks")
    p.add_argument("-o", "--output")
    p.set_defaults(handler=cmd_reduce)
