"""
reduction/gadgets.py
Gadget geometry for the disjoint-paths reductions and the gadget-level verifiers.

Local frames have x to the right and y up. A placement maps a local cell c to
origin + R^rotation(c), where R(x, y) = (-y, x) turns a quarter counter-clockwise.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from itertools import combinations
from typing import Optional

from core.constants import CLAUSE_TARGET_OFFSET, GADGET_MIN_SIDE, GADGET_PERIMETER, VDP_PATH_BOUND
from core.grid import GridDims, Point
from paths.disjoint import GridPath, PathInstance, enumerate_paths

logger = logging.getLogger(__name__)


def rotate(p: Point, r: int) -> Point:
    x, y = p.x, p.y
    for _ in range(r % 4):
        x, y = -y, x
    return Point(x, y)


@dataclass(frozen=True)
class Placement:
    origin: Point
    rotation: int = 0

    def apply(self, local: Point) -> Point:
        q = rotate(local, self.rotation)
        return Point(self.origin.x + q.x, self.origin.y + q.y)


def bounding_box(cells) -> tuple[Point, Point]:
    xs = [p.x for p in cells]
    ys = [p.y for p in cells]
    return Point(min(xs), min(ys)), Point(max(xs), max(ys))


# ---------------------------------------------------------------------------
# Variable gadget
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class VariableShape:
    """
    Boundary ring of an a×b box. s sits on the top row at column x_s, t on the
    bottom row at column a-1-x_s, so both arcs around the ring have length a+b-2.
    """
    a: int
    b: int
    x_s: int

    def __post_init__(self):
        if min(self.a, self.b) < GADGET_MIN_SIDE:
            raise ValueError(f"gadget sides must be at least {GADGET_MIN_SIDE}, got {self.a}x{self.b}")
        if 2 * (self.a + self.b - 2) != GADGET_PERIMETER:
            raise ValueError(f"gadget ring must have {GADGET_PERIMETER} cells, got {self.a}x{self.b}")
        if not 0 < self.x_s < self.a - 1:
            raise ValueError(f"s must sit strictly inside the top row, got column {self.x_s}")

    @classmethod
    def of(cls, a: int, b: int) -> "VariableShape":
        return cls(a, b, (a - 1) // 2)

    @property
    def x_t(self) -> int:
        return self.a - 1 - self.x_s

    @property
    def s(self) -> Point:
        return Point(self.x_s, self.b - 1)

    @property
    def t(self) -> Point:
        return Point(self.x_t, 0)

    @cached_property
    def forward(self) -> GridPath:
        """Clockwise arc: right along the top, down the right side, left along the bottom."""
        top, right = self.b - 1, self.a - 1
        pts = [Point(x, top) for x in range(self.x_s, right + 1)]
        pts += [Point(right, y) for y in range(top - 1, -1, -1)]
        pts += [Point(x, 0) for x in range(right - 1, self.x_t - 1, -1)]
        return tuple(pts)

    @cached_property
    def backward(self) -> GridPath:
        top = self.b - 1
        pts = [Point(x, top) for x in range(self.x_s, -1, -1)]
        pts += [Point(0, y) for y in range(top - 1, -1, -1)]
        pts += [Point(x, 0) for x in range(1, self.x_t + 1)]
        return tuple(pts)

    @cached_property
    def ring(self) -> frozenset[Point]:
        return frozenset(self.forward) | frozenset(self.backward)

    @cached_property
    def interior(self) -> frozenset[Point]:
        return frozenset(Point(x, y) for x in range(1, self.a - 1) for y in range(1, self.b - 1))


STANDARD_SHAPE = VariableShape(14, 15, 6)


@dataclass(frozen=True)
class PlacedGadget:
    placement: Placement
    shape: VariableShape = STANDARD_SHAPE
    tag: str = ""

    def _map(self, cells) -> tuple[Point, ...]:
        return tuple(self.placement.apply(c) for c in cells)

    @property
    def s(self) -> Point:
        return self.placement.apply(self.shape.s)

    @property
    def t(self) -> Point:
        return self.placement.apply(self.shape.t)

    @cached_property
    def forward(self) -> GridPath:
        return self._map(self.shape.forward)

    @cached_property
    def backward(self) -> GridPath:
        return self._map(self.shape.backward)

    @cached_property
    def ring(self) -> frozenset[Point]:
        return frozenset(self._map(self.shape.ring))

    @cached_property
    def interior(self) -> frozenset[Point]:
        return frozenset(self._map(self.shape.interior))

    def local(self, p: Point) -> Point:
        return self.placement.apply(p)


# Chain moves for STANDARD_SHAPE: consecutive gadgets share part of a side, and the
# forward arc of one gadget covers the shared cells the next one's backward arc needs.
MAX_JOG = STANDARD_SHAPE.b - 3


def run_step(p: Placement, jog: int = 0) -> Placement:
    """Next gadget straight ahead, shifted sideways by jog."""
    if abs(jog) > MAX_JOG:
        raise ValueError(f"jog must be within ±{MAX_JOG}, got {jog}")
    sh = STANDARD_SHAPE
    return Placement(p.apply(Point(sh.a - 1, jog)), p.rotation)


def left_corner(p: Placement) -> Placement:
    sh = STANDARD_SHAPE
    return Placement(p.apply(Point(sh.x_s + sh.b, sh.b - 1)), (p.rotation + 1) % 4)


def right_corner(p: Placement) -> Placement:
    sh = STANDARD_SHAPE
    return Placement(p.apply(Point(sh.x_t + 1, 0)), (p.rotation - 1) % 4)


# ---------------------------------------------------------------------------
# Clause gadget (canonical orientation: s_C at the origin, south side free)
# ---------------------------------------------------------------------------

class ClauseFamily(str, Enum):
    LEFT = "left"
    DOWN = "down"
    UP = "up"


def _cells(*coords: tuple[int, int]) -> tuple[Point, ...]:
    return tuple(Point(x, y) for x, y in coords)


JUNCTION = Point(7, 0)
CLAUSE_TARGET = Point(*CLAUSE_TARGET_OFFSET)

_LEFT_PATH = _cells(
    (0, 0), *((-i, 0) for i in range(1, 8)), *((-7, -j) for j in range(1, 6)), *((x, -5) for x in range(-6, 9)),
)
_DOWN_TO_JUNCTION = _cells(
    (0, 0), (0, -1), (0, -2), (0, -3), (1, -3), (2, -3), *((2, y) for y in range(-2, 4)),
    (3, 3), (4, 3), (4, 2), (4, 1), (4, 0), (5, 0), (6, 0), (7, 0),
)
_UP_TO_JUNCTION = _cells(
    (0, 0), *((0, y) for y in range(1, 6)), *((x, 5) for x in range(1, 8)), *((7, y) for y in range(4, -1, -1)),
)
_TAIL = _cells((8, 0), (9, 0), *((9, y) for y in range(-1, -6, -1)), (8, -5))
_UNDER = _cells((7, -1), (7, -2), (6, -2), (5, -2), (5, -3), (5, -4), (5, -5), (6, -5), (7, -5), (8, -5))

CLAUSE_CORRIDOR: frozenset[Point] = frozenset(_LEFT_PATH + _DOWN_TO_JUNCTION + _UP_TO_JUNCTION + _TAIL + _UNDER)

# canonical port (heading from s_C towards the incoming edge) and tap gadget placement
CLAUSE_PORTS: dict[ClauseFamily, int] = {ClauseFamily.DOWN: 0, ClauseFamily.UP: 1, ClauseFamily.LEFT: 2}
CLAUSE_FREE_PORT = 3
CLAUSE_TAPS: dict[ClauseFamily, Placement] = {
    ClauseFamily.LEFT: Placement(Point(-20, -12), 0),
    ClauseFamily.DOWN: Placement(Point(22, 2), 2),
    ClauseFamily.UP: Placement(Point(-6, 18), 3),
}


@dataclass(frozen=True)
class PlacedClause:
    s: Point
    rotation: int = 0
    tag: str = ""

    def _frame(self) -> Placement:
        return Placement(self.s, self.rotation)

    @property
    def t(self) -> Point:
        return self._frame().apply(CLAUSE_TARGET)

    @cached_property
    def corridor(self) -> frozenset[Point]:
        frame = self._frame()
        return frozenset(frame.apply(c) for c in CLAUSE_CORRIDOR)

    def family_at(self, port: int) -> ClauseFamily:
        canonical = (port - self.rotation) % 4
        for family, p in CLAUSE_PORTS.items():
            if p == canonical:
                return family
        raise ValueError(f"port {port} is the free side of clause {self.tag or self.s}")

    def tap(self, family: ClauseFamily) -> Placement:
        """Placement of the gadget whose forward arc closes this family."""
        base = CLAUSE_TAPS[family]
        return Placement(self._frame().apply(base.origin), (base.rotation + self.rotation) % 4)


def clause_rotation(free_port: int) -> int:
    return (free_port - CLAUSE_FREE_PORT) % 4


# ---------------------------------------------------------------------------
# Verifiers
# ---------------------------------------------------------------------------

def _isolated(cells: frozenset[Point], s: Point, t: Point):
    """Shift cells so their bounding box starts at the origin; everything else in it is blocked."""
    lo, hi = bounding_box(cells)
    shift = lambda p: Point(p.x - lo.x, p.y - lo.y)  # noqa: E731
    dims = GridDims(hi.x - lo.x + 1, hi.y - lo.y + 1)
    open_cells = {shift(p) for p in cells}
    blocked = [p for p in dims.points() if p not in open_cells]
    inst = PathInstance(dims, ((shift(s), shift(t)),), VDP_PATH_BOUND)
    return inst, blocked, shift


@dataclass
class VariableGadgetReport:
    a: int
    b: int
    orientation: int
    paths: list[GridPath] = field(default_factory=list)
    matches_arcs: bool = False
    blocked: int = 0       # cells closed by (v, v) requests

    @property
    def lengths(self) -> list[int]:
        return [len(p) - 1 for p in self.paths]

    @property
    def ok(self) -> bool:
        return len(self.paths) == 2 and all(n == VDP_PATH_BOUND for n in self.lengths) and self.matches_arcs


def verify_variable_gadget(a: int, b: int, orientation: int = 0) -> VariableGadgetReport:
    """Enumerate every s-t path of length ≤ 27 through an isolated a×b gadget."""
    gadget = PlacedGadget(Placement(Point(0, 0), orientation), VariableShape.of(a, b))
    inst, blocked, shift = _isolated(gadget.ring, gadget.s, gadget.t)
    s, t = inst.requests[0]
    found = enumerate_paths(inst, s, t, blocked_vertices=blocked)
    arcs = {tuple(shift(p) for p in gadget.forward), tuple(shift(p) for p in gadget.backward)}
    report = VariableGadgetReport(a, b, orientation, found, set(found) == arcs, len(blocked))
    logger.debug("verify_variable_gadget %dx%d r%d: %d path(s)", a, b, orientation, len(found))
    return report


@dataclass
class ClausePathsReport:
    families: dict[ClauseFamily, list[tuple[int, Optional[int]]]]   # (length, junction step)
    solvable_when_closed: dict[frozenset, bool]                     # closed families -> any path left

    @property
    def ok(self) -> bool:
        return all(
            solvable == (len(closed) < len(ClauseFamily))
            for closed, solvable in self.solvable_when_closed.items()
        )


def _family_of(path: GridPath) -> ClauseFamily:
    first = path[1]
    if first.x < path[0].x:
        return ClauseFamily.LEFT
    return ClauseFamily.DOWN if first.y < path[0].y else ClauseFamily.UP


def verify_clause_paths() -> ClausePathsReport:
    """
    Path families of the isolated clause gadget, and which combinations of tap
    gadgets sitting on their forward arcs still leave an s_C-t_C path.
    """
    clause = PlacedClause(Point(0, 0))
    inst, blocked, shift = _isolated(clause.corridor, clause.s, clause.t)
    s, t = inst.requests[0]
    junction = shift(JUNCTION)

    families: dict[ClauseFamily, list[tuple[int, Optional[int]]]] = {f: [] for f in ClauseFamily}
    for path in enumerate_paths(inst, s, t, blocked_vertices=blocked):
        step = path.index(junction) if junction in path else None
        families[_family_of(path)].append((len(path) - 1, step))

    closures = {
        f: {shift(p) for p in PlacedGadget(clause.tap(f)).forward if p in clause.corridor}
        for f in ClauseFamily
    }
    outcome: dict[frozenset, bool] = {}
    for size in range(len(ClauseFamily) + 1):
        for closed in combinations(ClauseFamily, size):
            extra = set().union(*(closures[f] for f in closed)) if closed else set()
            left = enumerate_paths(inst, s, t, blocked_vertices=set(blocked) | extra)
            outcome[frozenset(closed)] = bool(left)
    return ClausePathsReport(families, outcome)
