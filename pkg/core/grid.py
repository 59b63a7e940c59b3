"""
core/grid.py
The shared data model: grids, robots, routes, schedules and their conflict semantics.

Coordinates: x grows rightward, y grows upward. Routes are stored as move
strings over {U, D, L, R, W} and expanded on demand.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Iterator, Optional, Sequence, Union

from core.constants import MOVE_ORDER, MOVE_VECTORS
from core.exceptions import BadInterval, HorizonMismatch, OutOfBounds


# ---------------------------------------------------------------------------
# Points and grids
# ---------------------------------------------------------------------------

@dataclass(frozen=True, order=True)
class Point:
    x: int
    y: int

    def moved(self, move: str) -> "Point":
        dx, dy = MOVE_VECTORS[move]
        return Point(self.x + dx, self.y + dy)

    def offset(self, dx: int, dy: int) -> "Point":
        return Point(self.x + dx, self.y + dy)

    def neighbors(self) -> list["Point"]:
        """The four axis neighbors in U, D, L, R order (not bounds-checked)."""
        return [self.moved(m) for m in "UDLR"]

    def as_list(self) -> list[int]:
        return [self.x, self.y]


@dataclass(frozen=True)
class GridDims:
    width: int   # n
    height: int  # m

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError(f"grid dimensions must be positive, got {self.width}x{self.height}")

    def contains(self, p: Point) -> bool:
        return 0 <= p.x < self.width and 0 <= p.y < self.height

    def points(self) -> Iterator[Point]:
        for y in range(self.height):
            for x in range(self.width):
                yield Point(x, y)

    @property
    def area(self) -> int:
        return self.width * self.height


# ---------------------------------------------------------------------------
# Robots and instances
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Robot:
    id: int
    start: Point   # s_i
    target: Point  # t_i


class ObjectiveKind(str, Enum):
    MAKESPAN = "makespan"
    LENGTH = "length"


@dataclass(frozen=True)
class Objective:
    kind: ObjectiveKind
    bound: int     # ℓ for makespan, λ for length

    def __post_init__(self):
        if self.bound < 0:
            raise ValueError(f"objective bound must be non-negative, got {self.bound}")


def makespan_bound(ell: int) -> Objective:
    return Objective(ObjectiveKind.MAKESPAN, ell)


def length_bound(lam: int) -> Objective:
    return Objective(ObjectiveKind.LENGTH, lam)


@dataclass(frozen=True)
class Instance:
    dims: GridDims
    robots: tuple[Robot, ...]
    objective: Optional[Objective] = None

    def __post_init__(self):
        object.__setattr__(self, "robots", tuple(self.robots))
        if not self.robots:
            raise ValueError("an instance needs at least one robot, got 0")
        for r in self.robots:
            if not self.dims.contains(r.start) or not self.dims.contains(r.target):
                raise ValueError(f"robot {r.id} endpoints lie outside {self.dims}, got {r.start}->{r.target}")
        if len({r.start for r in self.robots}) != len(self.robots):
            raise ValueError("robot starts must be pairwise distinct")
        if len({r.target for r in self.robots}) != len(self.robots):
            raise ValueError("robot targets must be pairwise distinct")

    @property
    def k(self) -> int:
        return len(self.robots)

    @property
    def starts(self) -> tuple[Point, ...]:
        return tuple(r.start for r in self.robots)

    @property
    def targets(self) -> tuple[Point, ...]:
        return tuple(r.target for r in self.robots)

    def with_objective(self, objective: Optional[Objective]) -> "Instance":
        return Instance(self.dims, self.robots, objective)


# ---------------------------------------------------------------------------
# Routes and schedules
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Route:
    start: Point
    moves: str = ""

    def __post_init__(self):
        bad = set(self.moves) - set(MOVE_ORDER)
        if bad:
            raise ValueError(f"moves must use the alphabet {MOVE_ORDER}, got {sorted(bad)}")

    @property
    def horizon(self) -> int:
        return len(self.moves)

    def positions(self) -> list[Point]:
        """Vertex sequence without any bounds check."""
        out = [self.start]
        for m in self.moves:
            out.append(out[-1].moved(m))
        return out

    @property
    def end(self) -> Point:
        return self.positions()[-1]

    def padded(self, horizon: int) -> "Route":
        if horizon < self.horizon:
            raise HorizonMismatch(f"cannot pad a route of horizon {self.horizon} down to {horizon}")
        return Route(self.start, self.moves + "W" * (horizon - self.horizon))

    def trimmed(self) -> "Route":
        """Drop trailing waits."""
        return Route(self.start, self.moves.rstrip("W"))


@dataclass(frozen=True)
class Schedule:
    horizon: int
    routes: tuple[Route, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "routes", tuple(self.routes))
        for i, r in enumerate(self.routes):
            if r.horizon != self.horizon:
                raise HorizonMismatch(f"route {i} has {r.horizon} moves, schedule horizon is {self.horizon}")

    @classmethod
    def from_routes(cls, routes: Sequence[Route]) -> "Schedule":
        """Build a schedule, padding every route with waits to the longest one."""
        horizon = max((r.horizon for r in routes), default=0)
        return cls(horizon, tuple(r.padded(horizon) for r in routes))

    def replace_route(self, index: int, route: Route) -> "Schedule":
        routes = list(self.routes)
        routes[index] = route
        return Schedule(self.horizon, tuple(routes))

    def normalized(self) -> "Schedule":
        """Trailing-wait normal form: the shortest horizon that keeps every route."""
        return Schedule.from_routes([r.trimmed() for r in self.routes])


def route_from_points(points: Sequence[Point]) -> Route:
    """Inverse of expansion: consecutive points must be equal or adjacent."""
    if not points:
        raise ValueError("a route needs at least one point, got 0")
    moves = []
    for p, q in zip(points, points[1:]):
        moves.append(move_between(p, q))
    return Route(points[0], "".join(moves))


def move_between(p: Point, q: Point) -> str:
    delta = (q.x - p.x, q.y - p.y)
    for m, vec in MOVE_VECTORS.items():
        if vec == delta:
            return m
    raise ValueError(f"points are not adjacent, got {p} -> {q}")


# ---------------------------------------------------------------------------
# Distances and lengths
# ---------------------------------------------------------------------------

def manhattan(p: Point, q: Point) -> int:
    """Δ(p, q) = |x_p − x_q| + |y_p − y_q|."""
    return abs(p.x - q.x) + abs(p.y - q.y)


def dist_min(inst: Instance) -> int:
    """Sum of start-target Manhattan distances: a lower bound on total traveled length."""
    return sum(manhattan(r.start, r.target) for r in inst.robots)


def route_length(r: Route) -> int:
    return sum(1 for m in r.moves if m != "W")


def traveled_length(s: Union[Schedule, Route]) -> int:
    """Number of non-wait moves of a route, or their sum over a schedule."""
    if isinstance(s, Route):
        return route_length(s)
    return sum(route_length(r) for r in s.routes)


def expand_route(r: Route, dims: Optional[GridDims] = None) -> list[Point]:
    """
    Materialize the vertex sequence (u_0, …, u_t) of a route.

    Parameters
    ----------
    r : Route
        The route to expand.
    dims : GridDims, optional
        Grid to check against. Without it only the non-negative quadrant is enforced.

    Returns
    -------
    list[Point]
        |moves| + 1 positions; position j is start displaced by the first j moves.
    """
    pos = r.start
    out = [pos]
    for step, m in enumerate(r.moves, start=1):
        pos = pos.moved(m)
        inside = dims.contains(pos) if dims is not None else (pos.x >= 0 and pos.y >= 0)
        if not inside:
            raise OutOfBounds(step, (pos.x, pos.y))
        out.append(pos)
    return out


def slack(r: Route, t1: int, t2: int) -> int:
    """(t2 − t1) − Δ(u_t1, u_t2)."""
    if t1 < 0 or t1 > t2 or t2 > r.horizon:
        raise BadInterval(f"interval [{t1}, {t2}] is not inside [0, {r.horizon}]")
    pts = r.positions()
    return (t2 - t1) - manhattan(pts[t1], pts[t2])


# ---------------------------------------------------------------------------
# Conflicts
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class VertexConflict:
    time: int
    point: Point


@dataclass(frozen=True)
class SwapConflict:
    time: int                   # robots exchange positions between time and time+1
    edge: tuple[Point, Point]   # normalized: smaller point first


ConflictReport = Optional[Union[VertexConflict, SwapConflict]]


def conflict_between(pa: Sequence[Point], pb: Sequence[Point]) -> ConflictReport:
    """Earliest conflict between two expanded position sequences of equal length."""
    if len(pa) != len(pb):
        raise HorizonMismatch(f"routes have horizons {len(pa) - 1} and {len(pb) - 1}")
    for r in range(len(pa)):
        if pa[r] == pb[r]:
            return VertexConflict(r, pa[r])
        if r + 1 < len(pa) and pa[r + 1] == pb[r] and pb[r + 1] == pa[r] and pa[r] != pa[r + 1]:
            return SwapConflict(r, tuple(sorted((pa[r], pa[r + 1]))))
    return None


def routes_conflict(a: Route, b: Route) -> ConflictReport:
    """Earliest vertex or swap conflict between two routes; vertex first at equal time."""
    if a.horizon != b.horizon:
        raise HorizonMismatch(f"routes have horizons {a.horizon} and {b.horizon}")
    return conflict_between(a.positions(), b.positions())


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

@dataclass
class ValidationReport:
    """First violation of each class; all None means the schedule is valid."""
    endpoints: Optional[str] = None                       # wrong robot count, start or end
    bounds: Optional[str] = None                          # a route leaves the grid
    conflict: Optional[tuple[int, int, ConflictReport]] = None  # (robot a, robot b, report)
    objective: Optional[str] = None                       # makespan or length bound exceeded

    @property
    def valid(self) -> bool:
        return self.endpoints is None and self.bounds is None and self.conflict is None and self.objective is None

    def violations(self) -> dict[str, str]:
        out = {}
        if self.endpoints:
            out["endpoints"] = self.endpoints
        if self.bounds:
            out["bounds"] = self.bounds
        if self.conflict:
            a, b, rep = self.conflict
            out["conflict"] = f"robots {a} and {b}: {rep}"
        if self.objective:
            out["objective"] = self.objective
        return out


def validate_schedule(inst: Instance, s: Schedule) -> ValidationReport:
    """Check endpoints, bounds, pairwise conflicts and the objective; never raises."""
    report = ValidationReport()
    if len(s.routes) != inst.k:
        report.endpoints = f"expected {inst.k} routes, got {len(s.routes)}"

    expanded: list[list[Point]] = []
    for robot, route in zip(inst.robots, s.routes):
        if report.endpoints is None and route.start != robot.start:
            report.endpoints = f"robot {robot.id} starts at {route.start}, expected {robot.start}"
        pts = route.positions()
        if report.bounds is None:
            for step, p in enumerate(pts[1:]):
                if not inst.dims.contains(p):
                    report.bounds = f"robot {robot.id} leaves the grid at step {step}"
                    break
        if report.endpoints is None and pts[-1] != robot.target:
            report.endpoints = f"robot {robot.id} ends at {pts[-1]}, expected {robot.target}"
        expanded.append(pts)

    first: Optional[tuple[int, int, ConflictReport]] = None
    for i, j in itertools.combinations(range(len(expanded)), 2):
        rep = conflict_between(expanded[i], expanded[j])
        if rep is not None and (first is None or rep.time < first[2].time):
            first = (inst.robots[i].id, inst.robots[j].id, rep)
    report.conflict = first

    obj = inst.objective
    if obj is not None:
        if obj.kind == ObjectiveKind.MAKESPAN and s.horizon > obj.bound:
            report.objective = f"horizon {s.horizon} exceeds makespan bound {obj.bound}"
        elif obj.kind == ObjectiveKind.LENGTH and traveled_length(s) > obj.bound:
            report.objective = f"traveled length {traveled_length(s)} exceeds length bound {obj.bound}"
    return report


def is_valid(inst: Instance, s: Schedule) -> bool:
    return validate_schedule(inst, s).valid


def first_conflicts(routes: Iterable[Route]) -> ConflictReport:
    """Earliest conflict among any pair of routes, or None."""
    expanded = [r.positions() for r in routes]
    best: ConflictReport = None
    for pa, pb in itertools.combinations(expanded, 2):
        rep = conflict_between(pa, pb)
        if rep is not None and (best is None or rep.time < best.time):
            best = rep
    return best
