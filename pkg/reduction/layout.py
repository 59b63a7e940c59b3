"""
reduction/layout.py
Places clause gadgets, variable loops and the gadget chains connecting them,
following a refined orthogonal drawing.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from core.constants import MIN_REFINEMENT
from core.exceptions import ClearanceViolation
from core.grid import Point, manhattan
from reduction.formula import Drawing, Formula, clause_name, heading, variable_name
from reduction.gadgets import (
    STANDARD_SHAPE,
    PlacedClause,
    PlacedGadget,
    Placement,
    clause_rotation,
    left_corner,
    right_corner,
    rotate,
    run_step,
)

logger = logging.getLogger(__name__)

RUN_ADVANCE = STANDARD_SHAPE.a - 1

# drawing point of the variable relative to the first loop gadget's origin
LOOP_ANCHOR = Point(3, 17)
# first loop gadget's neighbors that tap its forward or backward arc
FORWARD_TAP = Placement(Point(13, -7), 0)
BACKWARD_TAP = Placement(Point(21, 4), 0)


def _add(p: Point, q: Point) -> Point:
    return Point(p.x + q.x, p.y + q.y)


def _sub(p: Point, q: Point) -> Point:
    return Point(p.x - q.x, p.y - q.y)


def loop_symmetry(p: Point, times: int = 1) -> Point:
    """Quarter turn of the pinwheel: maps each loop gadget's frame onto the next one's."""
    for _ in range(times % 4):
        p = _add(rotate(p, 1), left_corner(Placement(Point(0, 0))).origin)
    return p


def loop_placements(offset: Point) -> list[Placement]:
    out = [Placement(offset, 0)]
    for _ in range(3):
        out.append(left_corner(out[-1]))
    return out


def tap_placement(offset: Point, side: int, positive: bool) -> Placement:
    """
    First chain gadget for a literal whose edge leaves the variable on side.
    A positive literal hangs off the backward arc, a negative one off the forward arc.
    """
    base = BACKWARD_TAP if positive else FORWARD_TAP
    return Placement(_add(offset, loop_symmetry(base.origin, side)), (base.rotation + side) % 4)


# ---------------------------------------------------------------------------
# Layout types
# ---------------------------------------------------------------------------

@dataclass
class VariableCycle:
    var: int
    anchor: Point                                   # refined drawing point
    loop: list[PlacedGadget] = field(default_factory=list)
    chains: dict[int, list[PlacedGadget]] = field(default_factory=dict)   # clause idx -> chain
    outline: list[tuple[Point, Point]] = field(default_factory=list)      # sides of the cycle polygon

    @property
    def gadgets(self) -> list[PlacedGadget]:
        return self.loop + [g for idx in sorted(self.chains) for g in self.chains[idx]]


@dataclass
class Layout:
    clauses: dict[int, PlacedClause] = field(default_factory=dict)
    cycles: dict[int, VariableCycle] = field(default_factory=dict)

    @property
    def gadget_count(self) -> int:
        return sum(len(c.gadgets) for c in self.cycles.values())


def _check_clearance(dr: Drawing) -> None:
    if dr.cell < MIN_REFINEMENT:
        raise ClearanceViolation(
            f"refined cell size {dr.cell} is below the minimum {MIN_REFINEMENT} needed to fit the gadgets"
        )


def place_clause(dr: Drawing, f: Formula, idx: int) -> PlacedClause:
    """Rotate the clause gadget so its free side faces the side no edge arrives on."""
    ports = {heading(dr.polyline(abs(lit), idx)[-1], dr.polyline(abs(lit), idx)[-2]) for lit in f.clauses[idx - 1]}
    free = set(range(4)) - ports
    if len(ports) != 3 or len(free) != 1:
        raise ValueError(f"clause {clause_name(idx)} needs its three edges on three distinct sides")
    return PlacedClause(dr.vertices[clause_name(idx)], clause_rotation(free.pop()), clause_name(idx))


# ---------------------------------------------------------------------------
# Chain routing
# ---------------------------------------------------------------------------

def _simplify(points: list[Point]) -> list[Point]:
    """Drop bends between collinear segments."""
    out = [points[0]]
    for p in points[1:]:
        if p == out[-1]:
            continue
        if len(out) >= 2 and heading(out[-2], out[-1]) == heading(out[-1], p):
            out[-1] = p
        else:
            out.append(p)
    return out


def _turn(p: Placement, kind: str) -> Placement:
    return left_corner(p) if kind == "L" else right_corner(p)


def _final_leg(cur: Placement, target: Placement, kind: str) -> list[Placement]:
    """
    Runs before and after the last corner, each jogged on its first step, so that the
    chain lands exactly on target.
    """
    e = rotate(_sub(target.origin, cur.origin), -cur.rotation)
    if kind == "L":
        corner = left_corner(Placement(Point(0, 0))).origin
        ex, ey = e.x - corner.x, e.y - corner.y
        n_a = math.ceil(ex / RUN_ADVANCE)
        jog_b = RUN_ADVANCE * n_a - ex
        n_b = math.ceil(ey / RUN_ADVANCE)
        jog_a = ey - RUN_ADVANCE * n_b
    else:
        corner = right_corner(Placement(Point(0, 0))).origin
        ex, ey = e.x - corner.x, e.y - corner.y
        n_a = math.floor(ex / RUN_ADVANCE)
        jog_b = ex - RUN_ADVANCE * n_a
        n_b = math.ceil(-ey / RUN_ADVANCE)
        jog_a = ey + RUN_ADVANCE * n_b

    if n_a < 0 or n_b < 0 or (n_a == 0 and jog_a) or (n_b == 0 and jog_b):
        raise ClearanceViolation(f"no room for the last corner towards {target.origin.as_list()}")

    out: list[Placement] = []
    try:
        for i in range(n_a):
            cur = run_step(cur, jog_a if i == 0 else 0)
            out.append(cur)
        cur = _turn(cur, kind)
        out.append(cur)
        for i in range(n_b):
            cur = run_step(cur, jog_b if i == 0 else 0)
            out.append(cur)
    except ValueError as exc:
        raise ClearanceViolation(str(exc)) from exc
    if cur != target:
        raise ClearanceViolation(f"chain ends at {cur} instead of {target}")
    return out


def route_chain(start: Placement, polyline: list[Point], target: Placement) -> list[Placement]:
    """
    Gadget placements from start to target (both included) along an orthogonal polyline.
    Every corner but the last uses nominal runs; a straight polyline gets a dogleg.

    Raises
    ------
    ClearanceViolation
        The chain cannot leave in the polyline's first direction or cannot reach target.
    """
    pts = _simplify(polyline)
    heads = [heading(p, q) for p, q in zip(pts, pts[1:])]
    if start.rotation != heads[0]:
        raise ClearanceViolation(f"chain starts facing {start.rotation}, drawing leaves facing {heads[0]}")

    turns: list[str] = []
    lengths: list[int] = []
    for i in range(1, len(heads)):
        delta = (heads[i] - heads[i - 1]) % 4
        if delta == 2:
            raise ValueError(f"polyline doubles back at {pts[i].as_list()}")
        turns.append("L" if delta == 1 else "R")
        lengths.append(abs(pts[i].x - pts[i - 1].x) + abs(pts[i].y - pts[i - 1].y))
    if not turns:
        turns, lengths = ["L", "R"], [RUN_ADVANCE]

    chain = [start]
    cur = start
    for kind, length in zip(turns[:-1], lengths[:-1]):
        for _ in range(max(1, round(length / RUN_ADVANCE))):
            cur = run_step(cur)
            chain.append(cur)
        cur = _turn(cur, kind)
        chain.append(cur)
    chain += _final_leg(cur, target, turns[-1])
    return chain


# ---------------------------------------------------------------------------
# Cycle clearance
# ---------------------------------------------------------------------------

Box = tuple[Point, Point]           # closed rectangle, low and high corner
Segment = tuple[Point, Point]


@dataclass(frozen=True)
class Clearance:
    """Distances of a variable cycle from the drawing, as fractions of the refined cell."""
    follow: int     # from the variable's own edges
    cross: int      # from each clause vertex, where the cycle crosses the edge

    @classmethod
    def of(cls, dr: Drawing) -> Clearance:
        return cls(dr.cell // 4, dr.cell // 2)


def _gap(a: Box, b: Box) -> int:
    dx = max(0, a[0].x - b[1].x, b[0].x - a[1].x)
    dy = max(0, a[0].y - b[1].y, b[0].y - a[1].y)
    return max(dx, dy)


def cycle_boxes(dr: Drawing, f: Formula, var: int, clearance: Clearance) -> list[Box]:
    """
    Every edge segment of var grown by the follow distance; the last segment of each
    edge stops short so that its box ends the cross distance before the clause vertex.
    """
    out: list[Box] = []
    for idx, _ in f.occurrences(var):
        pts = dr.polyline(var, idx)
        end, before = pts[-1], pts[-2]
        short = clearance.cross + clearance.follow
        if manhattan(end, before) <= short:
            raise ClearanceViolation(
                f"edge {variable_name(var)}-{clause_name(idx)} reaches the clause on a segment "
                f"no longer than {short}"
            )
        dx, dy = (before.x > end.x) - (before.x < end.x), (before.y > end.y) - (before.y < end.y)
        pts[-1] = end.offset(dx * short, dy * short)
        for p, q in zip(pts, pts[1:]):
            out.append((
                Point(min(p.x, q.x) - clearance.follow, min(p.y, q.y) - clearance.follow),
                Point(max(p.x, q.x) + clearance.follow, max(p.y, q.y) + clearance.follow),
            ))
    return out


def _runs(line: int, along: list[int], flags: np.ndarray, inside: np.ndarray, vertical: bool) -> list[Segment]:
    out: list[Segment] = []
    start: int | None = None
    for j in range(len(along)):
        same = start is not None and j < len(along) - 1 and flags[j] and inside[j] == inside[start]
        if start is not None and not same:
            a, b = along[start], along[j]
            out.append((Point(line, a), Point(line, b)) if vertical else (Point(a, line), Point(b, line)))
            start = None
        if start is None and j < len(along) - 1 and flags[j]:
            start = j
    return out


def cycle_outline(boxes: list[Box]) -> list[Segment]:
    """Sides of the rectilinear polygon bounding the union of boxes, collinear pieces merged."""
    xs = sorted({b[0].x for b in boxes} | {b[1].x for b in boxes})
    ys = sorted({b[0].y for b in boxes} | {b[1].y for b in boxes})
    # compressed cells, shifted by one so the border stays empty
    covered = np.zeros((len(xs) + 1, len(ys) + 1), dtype=bool)
    for lo, hi in boxes:
        covered[xs.index(lo.x) + 1:xs.index(hi.x) + 1, ys.index(lo.y) + 1:ys.index(hi.y) + 1] = True
    vert = covered[1:, :] != covered[:-1, :]
    horiz = covered[:, 1:] != covered[:, :-1]
    out: list[Segment] = []
    for i, x in enumerate(xs):
        out += _runs(x, ys, vert[i, 1:], covered[i + 1, 1:], vertical=True)
    for j, y in enumerate(ys):
        out += _runs(y, xs, horiz[1:, j], covered[1:, j + 1], vertical=False)
    return out


def check_cycle_clearance(dr: Drawing, f: Formula) -> dict[int, list[Box]]:
    """
    Raises ClearanceViolation unless every variable cycle has sides of at least the
    follow distance, stays the follow distance away from every other cycle and keeps
    the cross distance from every clause vertex.
    """
    clearance = Clearance.of(dr)
    boxes = {var: cycle_boxes(dr, f, var, clearance) for var in range(1, f.num_vars + 1) if f.occurrences(var)}
    for var, own in boxes.items():
        for p, q in cycle_outline(own):
            if manhattan(p, q) < clearance.follow:
                raise ClearanceViolation(
                    f"cycle of {variable_name(var)} has a side of length {manhattan(p, q)} "
                    f"at {p.as_list()}, below {clearance.follow}"
                )
        for idx in range(1, len(f.clauses) + 1):
            c = dr.vertices[clause_name(idx)]
            near = min(_gap((c, c), b) for b in own)
            if near < clearance.cross:
                raise ClearanceViolation(
                    f"cycle of {variable_name(var)} passes {near} from {clause_name(idx)}, below {clearance.cross}"
                )
    for (u, bu), (v, bv) in itertools.combinations(boxes.items(), 2):
        near = min(_gap(a, b) for a in bu for b in bv)
        if near < clearance.follow:
            raise ClearanceViolation(
                f"cycles of {variable_name(u)} and {variable_name(v)} come within {near}, below {clearance.follow}"
            )
    return boxes


# ---------------------------------------------------------------------------
# Whole layout
# ---------------------------------------------------------------------------

def layout_variable_cycle(
    f: Formula, dr: Drawing, var: int, clauses: dict[int, PlacedClause] | None = None,
) -> VariableCycle:
    """
    Loop around the variable's drawing point plus one gadget chain per occurrence,
    ending on the gadget that closes the clause path family the edge arrives at.
    dr must already be refined.
    """
    _check_clearance(dr)
    name = variable_name(var)
    anchor = dr.vertices[name]
    offset = _sub(anchor, LOOP_ANCHOR)
    cycle = VariableCycle(var, anchor)
    cycle.outline = cycle_outline(cycle_boxes(dr, f, var, Clearance.of(dr)))
    cycle.loop = [PlacedGadget(p, tag=f"{name}#L{i}") for i, p in enumerate(loop_placements(offset))]

    for idx, lit in f.occurrences(var):
        clause = clauses[idx] if clauses and idx in clauses else place_clause(dr, f, idx)
        line = dr.polyline(var, idx)
        port = heading(line[-1], line[-2])
        target = clause.tap(clause.family_at(port))
        start = tap_placement(offset, heading(line[0], line[1]), lit > 0)
        chain = route_chain(start, line, target)
        cycle.chains[idx] = [
            PlacedGadget(p, tag=f"{name}/{clause_name(idx)}#{i}") for i, p in enumerate(chain)
        ]
        logger.debug("chain %s-%s: %d gadget(s)", name, clause_name(idx), len(chain))
    return cycle


def build_layout(f: Formula, dr: Drawing) -> Layout:
    """Clauses first, then variable cycles, both in index order. dr must already be refined."""
    _check_clearance(dr)
    dr.check_against(f)
    dr.check_plane()
    check_cycle_clearance(dr, f)
    out = Layout()
    for idx in range(1, len(f.clauses) + 1):
        out.clauses[idx] = place_clause(dr, f, idx)
    for var in range(1, f.num_vars + 1):
        if f.occurrences(var):
            out.cycles[var] = layout_variable_cycle(f, dr, var, out.clauses)
    logger.info(
        "build_layout: %d clause(s), %d variable cycle(s), %d gadget(s)",
        len(out.clauses), len(out.cycles), out.gadget_count,
    )
    return out
