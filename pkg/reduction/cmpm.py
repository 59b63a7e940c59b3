"""
reduction/cmpm.py
Robot gadgets for the makespan reduction (ℓ = 26) and their reachability checks.

Stream robots have zero slack: each moves 26 cells in a fixed direction, so their
routes are forced and they act as moving obstacles. The pink robot goes 25 right and
1 up; it can only step up once the blue stream above it has passed. The clause robot
starts at the clause point and must reach the cell 4 right and 7 below it. Three
connection robots, one per literal, either cut off one of its escape routes or stay
clear of it.

Local frames put the clause point at the origin with x to the right and y up.
Stream rows and the gap shapes are a reconstruction; verify_clause_gadget checks
them by exhaustive time-expanded search.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Optional, Sequence

from core.config import get_settings
from core.constants import CLAUSE_ROBOT_OFFSET, CMPM_MAKESPAN, MOVE_ORDER, MOVE_VECTORS
from core.exceptions import LayoutOverlap
from core.grid import (
    GridDims,
    Instance,
    Point,
    Robot,
    Route,
    first_conflicts,
    makespan_bound,
    manhattan,
)
from reduction.formula import Drawing, Formula, heading, refine_drawing, variable_name
from reduction.gadgets import bounding_box, rotate
from reduction.layout import place_clause

logger = logging.getLogger(__name__)

State = tuple[Point, int]   # (cell, time)


# ---------------------------------------------------------------------------
# Time-expanded reachability
# ---------------------------------------------------------------------------

@dataclass
class Reachability:
    """States of the moving robot lying on some start-target route of the given horizon."""
    start: Point
    target: Point
    horizon: int
    alive: list[set[Point]] = field(default_factory=list)            # per time step
    succ: dict[State, set[Point]] = field(default_factory=dict)

    @property
    def reachable(self) -> bool:
        return self.target in self.alive[self.horizon] if self.alive else False

    @property
    def states(self) -> set[State]:
        return {(p, t) for t, layer in enumerate(self.alive) for p in layer}

    def __contains__(self, state: State) -> bool:
        p, t = state
        return 0 <= t < len(self.alive) and p in self.alive[t]

    def route(self) -> Optional[Route]:
        """One surviving route, preferring moves in MOVE_ORDER."""
        if not self.reachable:
            return None
        cur, moves = self.start, []
        for t in range(self.horizon):
            for m in MOVE_ORDER:
                q = cur.moved(m)
                if q in self.alive[t + 1] and q in self.succ.get((cur, t), ()):
                    moves.append(m)
                    cur = q
                    break
        return Route(self.start, "".join(moves))


def survivors(
    start: Point,
    target: Point,
    horizon: int,
    obstacles: Sequence[Route],
    forbidden: Iterable[State] = (),
    dims: Optional[GridDims] = None,
) -> Reachability:
    """
    Forward layers from (start, 0) pruned by the remaining distance to target, then a
    backward sweep from (target, horizon). Obstacle routes are fixed; moves that hit an
    obstacle's cell or swap with an obstacle are dropped.
    """
    paths = [r.padded(horizon).positions() for r in obstacles]
    occupied = [{p[t] for p in paths} for t in range(horizon + 1)]
    steps = [{(p[t], p[t + 1]) for p in paths} for t in range(horizon)]
    forbidden = set(forbidden)

    out = Reachability(start, target, horizon)
    layers: list[set[Point]] = [set()]
    if start not in occupied[0] and (start, 0) not in forbidden:
        layers[0].add(start)
    for t in range(horizon):
        nxt: set[Point] = set()
        for p in layers[t]:
            for m in MOVE_ORDER:
                q = p.moved(m)
                if dims is not None and not dims.contains(q):
                    continue
                if manhattan(q, target) > horizon - (t + 1):
                    continue
                if q in occupied[t + 1] or (q, p) in steps[t] or (q, t + 1) in forbidden:
                    continue
                out.succ.setdefault((p, t), set()).add(q)
                nxt.add(q)
        layers.append(nxt)

    alive: list[set[Point]] = [set() for _ in range(horizon + 1)]
    alive[horizon] = {target} & layers[horizon]
    for t in range(horizon - 1, -1, -1):
        alive[t] = {p for p in layers[t] if out.succ.get((p, t), set()) & alive[t + 1]}
    out.alive = alive
    return out


# ---------------------------------------------------------------------------
# Clause gadget
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Stream:
    name: str
    row: int
    lo: int          # leftmost start column
    hi: int          # rightmost start column
    direction: str   # "L" or "R"

    def routes(self, horizon: int = CMPM_MAKESPAN) -> list[Route]:
        return [Route(Point(x, self.row), self.direction * horizon) for x in range(self.lo, self.hi + 1)]


CLAUSE_STREAMS: tuple[Stream, ...] = (
    Stream("green", 0, -14, -1, "R"),
    Stream("blue", -1, 2, 22, "L"),
    Stream("green-low", -2, -14, -3, "R"),
    Stream("blue-up", 1, 2, 21, "L"),
    *(Stream(f"step-{y}", y, y + 1, y + 2, "L") for y in range(2, 6)),
    Stream("lid", 6, 7, 11, "L"),
)

CLAUSE_ROBOT_START = Point(0, 0)
CLAUSE_ROBOT_TARGET = Point(*CLAUSE_ROBOT_OFFSET)

# earliest route: the blue stream clears the cell above it after 12 steps
PINK_ROUTE = Route(Point(-2, -2), "R" * 12 + "U" + "R" * 13)


class ConnectionSide(str, Enum):
    LEFT = "left"
    RIGHT = "right"
    TOP = "top"


@dataclass(frozen=True)
class ConnectionRobot:
    side: ConnectionSide
    blocking: Route   # taken when the literal is false
    free: Route

    @property
    def start(self) -> Point:
        return self.blocking.start

    @property
    def target(self) -> Point:
        return self.blocking.end


CONNECTION_ROBOTS: dict[ConnectionSide, ConnectionRobot] = {
    ConnectionSide.LEFT: ConnectionRobot(
        ConnectionSide.LEFT, Route(Point(-15, -1), "R" * 8 + "D" * 18), Route(Point(-15, -1), "D" * 5 + "R" * 8 + "D" * 13),
    ),
    ConnectionSide.RIGHT: ConnectionRobot(
        ConnectionSide.RIGHT, Route(Point(23, -1), "L" * 12 + "D" * 14), Route(Point(23, -1), "D" * 14 + "L" * 12),
    ),
    ConnectionSide.TOP: ConnectionRobot(
        ConnectionSide.TOP, Route(Point(4, 14), "D" * 7 + "L" * 19), Route(Point(4, 14), "L" * 5 + "D" * 7 + "L" * 14),
    ),
}

# clause robot positions one of which every successful route passes through
ESCAPE_STATES: dict[ConnectionSide, tuple[State, ...]] = {
    ConnectionSide.LEFT: ((Point(-7, -1), 8),),
    ConnectionSide.RIGHT: ((Point(11, -1), 12),),
    ConnectionSide.TOP: ((Point(1, 7), 9), (Point(2, 7), 9)),
}

CANONICAL_ROUTES: dict[ConnectionSide, Route] = {
    ConnectionSide.RIGHT: Route(CLAUSE_ROBOT_START, "R" * 11 + "D" * 3 + "L" * 7 + "D" * 4 + "W"),
    ConnectionSide.LEFT: Route(CLAUSE_ROBOT_START, "D" + "L" * 7 + "DD" + "R" * 10 + "D" * 4 + "WR"),
    ConnectionSide.TOP: Route(CLAUSE_ROBOT_START, "U" * 7 + "R" * 4 + "D" * 5 + "W" + "D" * 9),
}


def stream_routes() -> list[Route]:
    return [r for s in CLAUSE_STREAMS for r in s.routes()]


def clause_obstacles() -> list[Route]:
    """Streams plus the pink robot on its earliest route."""
    return stream_routes() + [PINK_ROUTE]


def _follows(route: Route, reach: Reachability) -> bool:
    return all((p, t) in reach for t, p in enumerate(route.positions()))


# the top escape one column short of the corner: the top connection robot moves into it next
TOP_LATE_STATE: State = (Point(1, 7), 9)


@dataclass
class ClauseGadgetReport:
    survivor_states: int
    escapes_realized: dict[ConnectionSide, bool]
    canonical_realized: dict[ConnectionSide, bool]
    unescaped_reachable: bool          # target reachable while avoiding every escape state
    behind_green: list[State]          # row 0 left of the clause point after it left
    after_top_late: set[str] = field(default_factory=set)   # surviving moves out of TOP_LATE_STATE

    @property
    def ok(self) -> bool:
        return (
            all(self.escapes_realized.values())
            and all(self.canonical_realized.values())
            and not self.unescaped_reachable
            and not self.behind_green
            and self.after_top_late <= {"W", "R"}
        )


def verify_clause_gadget() -> ClauseGadgetReport:
    """
    Exhaustive reachability of the clause robot against the streams and the pink
    robot: every route passes one escape state, each escape is used by some route,
    the hand-written canonical routes survive, and a route through (1, 7) at step 9
    waits or goes right in step 10.
    """
    fixed = clause_obstacles()
    reach = survivors(CLAUSE_ROBOT_START, CLAUSE_ROBOT_TARGET, CMPM_MAKESPAN, fixed)
    all_escapes = [s for states in ESCAPE_STATES.values() for s in states]
    pruned = survivors(CLAUSE_ROBOT_START, CLAUSE_ROBOT_TARGET, CMPM_MAKESPAN, fixed, forbidden=all_escapes)
    late, t = TOP_LATE_STATE
    report = ClauseGadgetReport(
        survivor_states=len(reach.states),
        escapes_realized={side: any(s in reach for s in states) for side, states in ESCAPE_STATES.items()},
        canonical_realized={side: _follows(r, reach) for side, r in CANONICAL_ROUTES.items()},
        unescaped_reachable=pruned.reachable,
        behind_green=sorted(
            ((p, t) for p, t in reach.states if p.y == 0 and p.x < 0 and t >= 1), key=lambda s: (s[1], s[0]),
        ),
        after_top_late={
            m for m in MOVE_ORDER
            if late.moved(m) in reach.succ.get(TOP_LATE_STATE, ()) and late.moved(m) in reach.alive[t + 1]
        },
    )
    logger.info("verify_clause_gadget: %d surviving state(s), ok=%s", report.survivor_states, report.ok)
    return report


def connection_routes(values: dict[ConnectionSide, bool]) -> list[Route]:
    """Fixed connection robot routes for literal values: the blocking route when false."""
    return [
        robot.free if values[side] else robot.blocking
        for side, robot in CONNECTION_ROBOTS.items()
    ]


def solve_clause_fixture(values: dict[ConnectionSide, bool]) -> Optional[Route]:
    """
    Clause gadget with its three connection robots on fixed routes: a clause robot
    route of makespan 26, or None when every literal is false.

    Raises
    ------
    LayoutOverlap
        The fixed robots already conflict with each other.
    """
    fixed = clause_obstacles() + connection_routes(values)
    clash = first_conflicts(r.padded(CMPM_MAKESPAN) for r in fixed)
    if clash is not None:
        raise LayoutOverlap(f"fixed clause robots conflict: {clash}")
    return survivors(CLAUSE_ROBOT_START, CLAUSE_ROBOT_TARGET, CMPM_MAKESPAN, fixed).route()


# ---------------------------------------------------------------------------
# Arrow
# ---------------------------------------------------------------------------

def arrow_robots(down: int, opening: int, horizon: int) -> list[Route]:
    """
    Right-moving robots in front of a variable robot at the origin heading down-left:
    a straight row under its first opening-1 left steps and a diagonal under its
    first down-1 down steps.
    """
    cells = [Point(-2 * a - 1, -1) for a in range(1, opening)]
    cells += [Point(-2 - b, -b) for b in range(2, down)]
    return [Route(p, "R" * horizon) for p in cells]


@dataclass
class ArrowReport:
    down: int
    left: int
    opening: int
    inside_box: list[State]
    opens_horizontally: bool
    opens_downward: bool

    @property
    def ok(self) -> bool:
        return not self.inside_box and self.opens_horizontally and self.opens_downward


def verify_arrow_gadget(down: int = 7, left: int = 19, opening: int = 5) -> ArrowReport:
    """
    A zero-slack robot going down and left past an arrow either takes its first
    opening steps horizontally or its first down steps downward.
    """
    if down < 2 or opening < 2 or left < opening:
        raise ValueError(f"arrow needs down ≥ 2 and 2 ≤ opening ≤ left, got {down}, {left}, {opening}")
    horizon = down + left
    target = Point(-left, -down)
    reach = survivors(Point(0, 0), target, horizon, arrow_robots(down, opening, horizon))
    inside = sorted(
        ((p, t) for p, t in reach.states if 1 <= -p.x < opening and 1 <= -p.y < down), key=lambda s: (s[1], s[0]),
    )
    return ArrowReport(
        down, left, opening, inside,
        opens_horizontally=(Point(-opening, 0), opening) in reach,
        opens_downward=(Point(0, -down), down) in reach,
    )


# ---------------------------------------------------------------------------
# Whole-formula compile
# ---------------------------------------------------------------------------

# canonical heading from the clause point towards each connection robot's edge
CONNECTION_PORTS: dict[ConnectionSide, int] = {ConnectionSide.RIGHT: 0, ConnectionSide.TOP: 1, ConnectionSide.LEFT: 2}


def rotate_route(r: Route, q: int, origin: Point) -> Route:
    vec_to_move = {v: m for m, v in MOVE_VECTORS.items()}
    moves = "".join(vec_to_move[tuple(rotate(Point(*MOVE_VECTORS[m]), q).as_list())] for m in r.moves)
    p = rotate(r.start, q)
    return Route(Point(p.x + origin.x, p.y + origin.y), moves)


def literal_sides(dr: Drawing, f: Formula, idx: int, rotation: int) -> dict[ConnectionSide, int]:
    """The literal whose edge arrives on each connection side of clause idx."""
    out: dict[ConnectionSide, int] = {}
    for lit in f.clauses[idx - 1]:
        pts = dr.polyline(abs(lit), idx)
        canonical = (heading(pts[-1], pts[-2]) - rotation) % 4
        side = next((s for s, p in CONNECTION_PORTS.items() if p == canonical), None)
        if side is None:
            raise ValueError(f"literal {lit} arrives on the free side of clause {idx}")
        out[side] = lit
    return out


@dataclass
class CmpmReduction:
    instance: Instance
    forced: dict[int, Route]                         # robot id -> stream route, or connection route under force
    clause_robots: dict[int, int]                    # clause idx -> robot id
    connection_robots: dict[int, dict[ConnectionSide, int]]
    shift: Point
    pink_robots: dict[int, int] = field(default_factory=dict)
    pink_routes: dict[int, Route] = field(default_factory=dict)   # robot id -> earliest route
    literals: dict[int, dict[ConnectionSide, int]] = field(default_factory=dict)
    force: dict[int, bool] = field(default_factory=dict)

    def clause_route(self, idx: int) -> Optional[Route]:
        """
        A makespan-26 route for clause idx's robot against every fixed route, pink
        robots on their earliest routes; None when the clause robot is cut off.
        """
        rid = self.clause_robots[idx]
        robot = self.instance.robots[rid]
        fixed = list(self.forced.values()) + list(self.pink_routes.values())
        reach = survivors(robot.start, robot.target, CMPM_MAKESPAN, fixed, dims=self.instance.dims)
        return reach.route()


def compile_cmpm(
    f: Formula,
    dr: Drawing,
    factor: Optional[int] = None,
    force: Optional[dict[int, bool]] = None,
) -> CmpmReduction:
    """
    Makespan instance with ℓ = 26: per clause the rotated stream gadget, its pink,
    clause and three connection robots, rotated like the disjoint-paths clause gadget.

    Parameters
    ----------
    force : dict, optional
        variable -> value. The connection robots of a forced variable's literals are
        fixed to their free route when the literal is true and their blocking route
        otherwise; unforced connection robots stay free.

    Raises
    ------
    LayoutOverlap
        Two clause gadgets' footprints intersect or their forced routes conflict.
    ValueError
        force names a variable that occurs in no clause.
    """
    factor = get_settings().REFINEMENT_FACTOR if factor is None else factor
    force = dict(force or {})
    occurring = {abs(lit) for clause in f.clauses for lit in clause}
    for var in force:
        if var not in occurring:
            raise ValueError(f"cannot force {variable_name(var)}: it occurs in no clause")
    refined = refine_drawing(dr, factor)
    refined.check_against(f)

    # (role, start, target, fixed route or None, clause idx, connection side or None)
    placed: list[tuple[str, Point, Point, Optional[Route], int, Optional[ConnectionSide]]] = []
    boxes: list[tuple[int, Point, Point]] = []
    literals: dict[int, dict[ConnectionSide, int]] = {}
    for idx in range(1, len(f.clauses) + 1):
        clause = place_clause(refined, f, idx)
        literals[idx] = literal_sides(refined, f, idx, clause.rotation)

        def put(r: Route) -> Route:
            return rotate_route(r, clause.rotation, clause.s)

        cells: list[Point] = []
        for r in map(put, stream_routes()):
            placed.append(("stream", r.start, r.end, r, idx, None))
            cells += r.positions()
        pink = put(PINK_ROUTE)
        placed.append(("pink", pink.start, pink.end, pink, idx, None))
        cells += pink.positions()
        start, target = put(Route(CLAUSE_ROBOT_START)).start, put(Route(CLAUSE_ROBOT_TARGET)).start
        placed.append(("clause", start, target, None, idx, None))
        cells += [start, target]
        for side, robot in CONNECTION_ROBOTS.items():
            blocking, free = put(robot.blocking), put(robot.free)
            lit = literals[idx][side]
            chosen = None
            if abs(lit) in force:
                chosen = free if force[abs(lit)] == (lit > 0) else blocking
            placed.append(("connection", blocking.start, blocking.end, chosen, idx, side))
            cells += blocking.positions() + free.positions()

        lo, hi = bounding_box(cells)
        for other, olo, ohi in boxes:
            if lo.x <= ohi.x and olo.x <= hi.x and lo.y <= ohi.y and olo.y <= hi.y:
                raise LayoutOverlap(f"clause gadgets C{other} and C{idx} overlap")
        boxes.append((idx, lo, hi))

    lo = Point(min(b[1].x for b in boxes), min(b[1].y for b in boxes))
    hi = Point(max(b[2].x for b in boxes), max(b[2].y for b in boxes))
    shift = Point(1 - lo.x, 1 - lo.y)
    dims = GridDims(hi.x - lo.x + 3, hi.y - lo.y + 3)

    def moved(p: Point) -> Point:
        return Point(p.x + shift.x, p.y + shift.y)

    robots: list[Robot] = []
    forced: dict[int, Route] = {}
    clause_robots: dict[int, int] = {}
    pink_robots: dict[int, int] = {}
    pink_routes: dict[int, Route] = {}
    connections: dict[int, dict[ConnectionSide, int]] = {}
    for role, start, target, route, idx, side in placed:
        rid = len(robots)
        robots.append(Robot(rid, moved(start), moved(target)))
        if role == "stream":
            forced[rid] = Route(moved(start), route.moves)
        elif role == "pink":
            pink_robots[idx] = rid
            pink_routes[rid] = Route(moved(start), route.moves)
        elif role == "clause":
            clause_robots[idx] = rid
        else:
            connections.setdefault(idx, {})[side] = rid
            if route is not None:
                forced[rid] = Route(moved(start), route.moves)

    clash = first_conflicts(r.padded(CMPM_MAKESPAN) for r in [*forced.values(), *pink_routes.values()])
    if clash is not None:
        raise LayoutOverlap(f"fixed routes conflict: {clash}")
    try:
        inst = Instance(dims, tuple(robots), makespan_bound(CMPM_MAKESPAN))
    except ValueError as exc:
        raise LayoutOverlap(str(exc)) from exc
    logger.info(
        "compile_cmpm: %dx%d grid, %d robot(s), %d forced, force=%s",
        dims.width, dims.height, inst.k, len(forced), force or "-",
    )
    return CmpmReduction(
        inst, forced, clause_robots, connections, shift,
        pink_robots, pink_routes, literals, force,
    )
