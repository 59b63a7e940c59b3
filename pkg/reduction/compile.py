"""
reduction/compile.py
Compiles a formula and its orthogonal drawing into a d=27 disjoint-paths instance.

Every open cell belongs to a gadget corridor; every other cell inside a gadget's
bounding box (plus a one-cell margin) carries a blocker request.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from typing import Optional

from core.config import get_settings
from core.constants import VDP_PATH_BOUND
from core.exceptions import LayoutOverlap
from core.grid import GridDims, Point
from paths.disjoint import GridPath, PathInstance, blocker_expansion_edp
from reduction.formula import Drawing, Formula, refine_drawing, variable_name
from reduction.gadgets import PlacedGadget, bounding_box
from reduction.layout import Layout, build_layout

logger = logging.getLogger(__name__)

# cells of the first loop gadget whose blocking forces the variable
FORCE_FALSE_CELL = Point(13, 10)    # on the forward arc
FORCE_TRUE_CELL = Point(0, 3)       # on the backward arc

Component = tuple   # ("clause", c) | ("loop", v) | ("chain", v, c)


@dataclass
class VdpReduction:
    instance: PathInstance
    layout: Layout
    shift: Point
    loop_requests: dict[int, int] = field(default_factory=dict)   # var -> request index of its first loop gadget
    forced: dict[int, bool] = field(default_factory=dict)

    def to_grid(self, p: Point) -> Point:
        return Point(p.x + self.shift.x, p.y + self.shift.y)

    def assignment(self, paths: list[GridPath]) -> dict[int, bool]:
        """Truth values read off a solution: true iff the first loop gadget uses its forward arc."""
        out = {}
        for var, idx in self.loop_requests.items():
            g0 = self.layout.cycles[var].loop[0]
            out[var] = tuple(paths[idx]) == tuple(self.to_grid(p) for p in g0.forward)
        return out


def _related(a: Component, b: Component) -> bool:
    if a == b:
        return True
    kinds = {a[0], b[0]}
    if kinds == {"loop", "chain"}:
        loop, chain = (a, b) if a[0] == "loop" else (b, a)
        return loop[1] == chain[1]
    if kinds == {"clause", "chain"}:
        clause, chain = (a, b) if a[0] == "clause" else (b, a)
        return clause[1] == chain[2]
    return False


def _components(layout: Layout) -> list[tuple[Component, object]]:
    """(component, gadget) pairs in emission order: clauses, then loops, then chains."""
    out: list[tuple[Component, object]] = [(("clause", c), g) for c, g in sorted(layout.clauses.items())]
    for var, cycle in sorted(layout.cycles.items()):
        out += [(("loop", var), g) for g in cycle.loop]
    for var, cycle in sorted(layout.cycles.items()):
        for c in sorted(cycle.chains):
            out += [(("chain", var, c), g) for g in cycle.chains[c]]
    return out


def _open_cells(gadget) -> frozenset[Point]:
    return gadget.ring if isinstance(gadget, PlacedGadget) else gadget.corridor


def check_overlaps(layout: Layout) -> None:
    """
    Raises
    ------
    LayoutOverlap
        An open cell lies inside a variable gadget, or two unrelated components
        share or touch a cell.
    """
    owners: dict[Point, set[Component]] = {}
    interiors: dict[Point, str] = {}
    for comp, g in _components(layout):
        for p in _open_cells(g):
            owners.setdefault(p, set()).add(comp)
        if isinstance(g, PlacedGadget):
            for p in g.interior:
                interiors[p] = g.tag

    for p, comps in owners.items():
        if p in interiors:
            raise LayoutOverlap(f"open cell {p.as_list()} lies inside gadget {interiors[p]}")
        touching = set(comps)
        for q in p.neighbors():
            touching |= owners.get(q, set())
        for a in comps:
            for b in touching:
                if not _related(a, b):
                    raise LayoutOverlap(f"{a} and {b} meet at {p.as_list()}")


def _force_cells(layout: Layout, force: dict[int, bool]) -> set[Point]:
    out = set()
    for var, value in force.items():
        if var not in layout.cycles:
            raise ValueError(f"cannot force {variable_name(var)}: it occurs in no clause")
        g0 = layout.cycles[var].loop[0]
        out.add(g0.local(FORCE_TRUE_CELL if value else FORCE_FALSE_CELL))
    return out


def compile_layout(layout: Layout, force: Optional[dict[int, bool]] = None) -> VdpReduction:
    force = dict(force or {})
    check_overlaps(layout)
    components = _components(layout)

    corridor: set[Point] = set()
    for _, g in components:
        corridor |= _open_cells(g)
    forced_cells = _force_cells(layout, force)
    corridor -= forced_cells

    blocked: set[Point] = set(forced_cells)
    for _, g in components:
        lo, hi = bounding_box(_open_cells(g))
        for x in range(lo.x - 1, hi.x + 2):
            for y in range(lo.y - 1, hi.y + 2):
                p = Point(x, y)
                if p not in corridor:
                    blocked.add(p)

    lo, hi = bounding_box(blocked)
    shift = Point(1 - lo.x, 1 - lo.y)
    dims = GridDims(hi.x - lo.x + 3, hi.y - lo.y + 3)

    def moved(p: Point) -> Point:
        return Point(p.x + shift.x, p.y + shift.y)

    requests: list[tuple[Point, Point]] = []
    loop_requests: dict[int, int] = {}
    for comp, g in components:
        if comp[0] == "loop" and comp[1] not in loop_requests:
            loop_requests[comp[1]] = len(requests)
        requests.append((moved(g.s), moved(g.t)))
    requests += [(moved(p), moved(p)) for p in sorted(blocked)]

    inst = PathInstance(dims, tuple(requests), VDP_PATH_BOUND)
    logger.info(
        "compile_vdp: %dx%d grid, %d gadget request(s), %d blocker(s), forced=%s",
        dims.width, dims.height, len(components), len(blocked), force or "-",
    )
    return VdpReduction(inst, layout, shift, loop_requests, force)


def compile_vdp(
    f: Formula,
    dr: Drawing,
    factor: Optional[int] = None,
    force: Optional[dict[int, bool]] = None,
) -> VdpReduction:
    """
    Vertex-disjoint paths instance with d = 27, solvable iff f is satisfiable
    (and agrees with force, when given).

    Parameters
    ----------
    factor : refinement applied to dr first; REFINEMENT_FACTOR from settings when None.
    force : variable -> value; blocks one arc of the variable's loop.

    Raises
    ------
    ClearanceViolation
        The refined drawing is too coarse for the gadgets.
    LayoutOverlap
        Two unrelated gadgets collide.
    """
    factor = get_settings().REFINEMENT_FACTOR if factor is None else factor
    layout = build_layout(f, refine_drawing(dr, factor))
    return compile_layout(layout, force)


def compile_edp(
    f: Formula,
    dr: Drawing,
    factor: Optional[int] = None,
    force: Optional[dict[int, bool]] = None,
) -> VdpReduction:
    """Edge-disjoint variant: compile_vdp followed by blocker expansion."""
    vdp = compile_vdp(f, dr, factor, force)
    return replace(vdp, instance=blocker_expansion_edp(vdp.instance))
