"""
solvers/construct.py
Constructive bounded-slack scheduler for CMP-L: total length ≤ dist_min + C·k².

Robots move one at a time, so validity reduces to "every single step enters a free cell".
Three regimes, chosen from the grid shape relative to 4k:

  wide   (both sides > 4k)  : private target-free columns, then vertical-then-horizontal
                              legs with shift-and-restore of column stacks.
  strip  (one side ≤ 4k)    : gather on the first line, route far lines through empty
                              lanes, then park/slot the last two lines and sweep.
  small  (both sides ≤ 4k)  : handed to the exact length solver (DelegatedToExact).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from analysis.turns import turn_count
from core.constants import DELEGATION_HORIZON_FACTOR, LENGTH_OVERHEAD_C, REVERSE_MOVE, TURN_BOUND_C
from core.exceptions import DelegatedToExact
from core.grid import GridDims, Instance, Point, Robot, Route, Schedule, dist_min, traveled_length

logger = logging.getLogger(__name__)

_TRANSPOSE_MOVE = {"U": "R", "R": "U", "D": "L", "L": "D", "W": "W"}


@dataclass
class CertifiedBound:
    """Bound report for a constructed schedule."""
    case: str                       # "wide" | "strip" | "line" | "small"
    dist_min: int
    total_length: int
    length_bound: int               # dist_min + C·k²
    turn_bound: int                 # 3k + C'
    turns: list[int] = field(default_factory=list)

    @property
    def overhead(self) -> int:
        return self.total_length - self.dist_min

    @property
    def within_bounds(self) -> bool:
        return self.total_length <= self.length_bound and all(t <= self.turn_bound for t in self.turns)


# ---------------------------------------------------------------------------
# Sequential move recorder
# ---------------------------------------------------------------------------

class _Sim:
    """Moves one robot per time step and refuses any step into an occupied cell."""

    def __init__(self, dims: GridDims, starts: Sequence[Point]):
        self.dims = dims
        self.starts = list(starts)
        self.pos = list(starts)
        self.at = {p: i for i, p in enumerate(starts)}
        self.moves: list[list[str]] = [[] for _ in starts]

    def step(self, i: int, m: str) -> None:
        q = self.pos[i].moved(m)
        if not self.dims.contains(q) or q in self.at:
            raise RuntimeError(f"construction step blocked: robot {i} {m} into {q}")
        del self.at[self.pos[i]]
        self.at[q] = i
        self.pos[i] = q
        for j, ms in enumerate(self.moves):
            ms.append(m if j == i else "W")

    def walk(self, i: int, moves: str) -> None:
        for m in moves:
            self.step(i, m)

    def walk_to_x(self, i: int, x: int) -> None:
        dx = x - self.pos[i].x
        self.walk(i, ("R" if dx > 0 else "L") * abs(dx))

    def walk_to_y(self, i: int, y: int) -> None:
        dy = y - self.pos[i].y
        self.walk(i, ("U" if dy > 0 else "D") * abs(dy))

    def schedule(self) -> Schedule:
        return Schedule.from_routes([Route(s, "".join(ms)) for s, ms in zip(self.starts, self.moves)])


# ---------------------------------------------------------------------------
# Shared building blocks
# ---------------------------------------------------------------------------

def assign_slots(
    items: Sequence[int],
    slots: Sequence[int],
    cost: Callable[[int, int], int],
) -> dict[int, int]:
    """
    Order-preserving assignment of sorted items to sorted slots minimizing total cost.

    items[a] gets a slot strictly left of items[a+1]'s slot.
    """
    n, m = len(items), len(slots)
    if n > m:
        raise ValueError(f"need at least {n} slots, got {m}")
    INF = float("inf")
    # best[a][b]: items[:a] placed within slots[:b]
    best = [[INF] * (m + 1) for _ in range(n + 1)]
    take = [[False] * (m + 1) for _ in range(n + 1)]
    for b in range(m + 1):
        best[0][b] = 0
    for a in range(1, n + 1):
        for b in range(a, m + 1):
            skip = best[a][b - 1]
            use = best[a - 1][b - 1] + cost(items[a - 1], slots[b - 1])
            if use <= skip:
                best[a][b], take[a][b] = use, True
            else:
                best[a][b] = skip
    out = {}
    a, b = n, m
    while a > 0:
        if take[a][b]:
            out[items[a - 1]] = slots[b - 1]
            a -= 1
        b -= 1
    return out


def sweep_line(sim: _Sim, robots: Sequence[int], goal_x: dict[int, int]) -> None:
    """
    Move robots sharing one row to goal columns whose order matches their current order.

    Right-movers go first, rightmost first; then left-movers, leftmost first.
    """
    right = sorted((i for i in robots if goal_x[i] > sim.pos[i].x), key=lambda i: -sim.pos[i].x)
    for i in right:
        sim.walk_to_x(i, goal_x[i])
    left = sorted((i for i in robots if goal_x[i] < sim.pos[i].x), key=lambda i: sim.pos[i].x)
    for i in left:
        sim.walk_to_x(i, goal_x[i])


def _shift_stack(sim: _Sim, q: Point) -> tuple[list[int], str]:
    """Open cell q by pushing the contiguous column stack through q one cell up or down."""
    options = []
    for d in ("U", "D"):
        run, p = [], q
        while p in sim.at:
            run.append(sim.at[p])
            p = p.moved(d)
        if sim.dims.contains(p):
            options.append((len(run), d, run))
    if not options:
        raise RuntimeError(f"column {q.x} has no free cell to open {q}")
    _, d, run = min(options, key=lambda o: o[0])
    for robot in reversed(run):
        sim.step(robot, d)
    return run, d


def _restore_stack(sim: _Sim, run: list[int], d: str) -> None:
    back = REVERSE_MOVE[d]
    for robot in run:
        sim.step(robot, back)


def _cross_row(sim: _Sim, i: int, tx: int) -> None:
    """Horizontal leg; each blocking column stack is shifted aside and restored once passed."""
    pending: Optional[tuple[list[int], str]] = None
    while sim.pos[i].x != tx:
        m = "R" if tx > sim.pos[i].x else "L"
        q = sim.pos[i].moved(m)
        shifted = _shift_stack(sim, q) if q in sim.at else None
        sim.step(i, m)
        if pending is not None:
            _restore_stack(sim, *pending)
        pending = shifted
    if pending is not None:
        _restore_stack(sim, *pending)


# ---------------------------------------------------------------------------
# Wide grids
# ---------------------------------------------------------------------------

def _construct_wide(inst: Instance) -> Schedule:
    dims = inst.dims
    starts, targets = inst.starts, inst.targets
    sim = _Sim(dims, starts)

    target_cols = {t.x for t in targets}
    free_cols = [c for c in range(dims.width) if c not in target_cols]
    order = sorted(range(inst.k), key=lambda i: (starts[i].x, starts[i].y))

    def detour(i: int, c: int) -> int:
        s, t = starts[i], targets[i]
        waste = abs(s.x - c) + abs(c - t.x) - abs(s.x - t.x)
        return waste * (dims.width + 1) + abs(s.x - c)

    column = assign_slots(order, free_cols, detour)

    # Private columns: rows are independent and order is preserved within each row.
    for y in sorted({p.y for p in starts}):
        sweep_line(sim, [i for i in range(inst.k) if starts[i].y == y], column)

    for i in range(inst.k):
        sim.walk_to_y(i, targets[i].y)   # private column holds no other robot and no target
        _cross_row(sim, i, targets[i].x)
    return sim.schedule()


# ---------------------------------------------------------------------------
# Strips (height ≤ 4k after transposition)
# ---------------------------------------------------------------------------

def _nearest_free(sim: _Sim, row: int, x0: int, forbidden: set[int]) -> int:
    for dist in range(sim.dims.width):
        for x in (x0 - dist, x0 + dist):
            if 0 <= x < sim.dims.width and x not in forbidden and Point(x, row) not in sim.at:
                return x
    raise RuntimeError(f"no free cell on row {row}")


def _via_lane(sim: _Sim, i: int, lane: int, x: int, row: int) -> None:
    sim.walk_to_y(i, lane)
    sim.walk_to_x(i, x)
    sim.walk_to_y(i, row)


def _construct_line(inst: Instance) -> Optional[Schedule]:
    """Single row: solvable exactly when start order equals target order."""
    by_start = sorted(range(inst.k), key=lambda i: inst.starts[i].x)
    goals = [inst.targets[i].x for i in by_start]
    if goals != sorted(goals):
        return None
    sim = _Sim(inst.dims, inst.starts)
    sweep_line(sim, list(range(inst.k)), {i: inst.targets[i].x for i in range(inst.k)})
    return sim.schedule()


def _construct_strip(inst: Instance) -> Schedule:
    dims = inst.dims
    top = dims.height - 1           # gathering line
    lane2 = top - 1                 # the line just below it
    starts, targets = inst.starts, inst.targets
    sim = _Sim(dims, starts)

    # Gather everything on the top line, nearest lines first.
    for y in range(top - 1, -1, -1):
        for i in sorted((i for i in range(inst.k) if starts[i].y == y), key=lambda i: starts[i].x):
            sim.walk_to_y(i, lane2)
            entry = Point(sim.pos[i].x, top)
            if entry in sim.at:
                _open_on_line(sim, entry)
            sim.step(i, "U")

    # Far lines, farthest first, each through the still-empty line above it.
    for row in range(0, top - 1):
        for i in (i for i in range(inst.k) if targets[i].y == row):
            _via_lane(sim, i, row + 1, targets[i].x, row)

    # Last two lines: slot everybody on the top line using the empty second line.
    low = [i for i in range(inst.k) if targets[i].y == lane2]
    high = [i for i in range(inst.k) if targets[i].y == top]
    anchor_cols = {targets[i].x for i in low}
    slot = {i: targets[i].x for i in low}
    high_sorted = sorted(high, key=lambda i: targets[i].x)
    allowed = [c for c in range(dims.width) if c not in anchor_cols]
    slot.update(assign_slots(high_sorted, allowed, lambda i, c: abs(c - targets[i].x)))
    slot_cols = set(slot.values())

    for i in low + high_sorted:
        goal = Point(slot[i], top)
        if sim.pos[i] == goal:
            continue
        occupant = sim.at.get(goal)
        if occupant is not None:
            park = _nearest_free(sim, top, goal.x, slot_cols)
            _via_lane(sim, occupant, lane2, park, top)
        _via_lane(sim, i, lane2, goal.x, top)

    for i in low:
        sim.step(i, "D")
    sweep_line(sim, high, {i: targets[i].x for i in high})
    return sim.schedule()


def _open_on_line(sim: _Sim, q: Point) -> None:
    """Push the contiguous run of robots through q one cell sideways along its row."""
    options = []
    for d in ("L", "R"):
        run, p = [], q
        while p in sim.at:
            run.append(sim.at[p])
            p = p.moved(d)
        if sim.dims.contains(p):
            options.append((len(run), d, run))
    if not options:
        raise RuntimeError(f"row {q.y} is full")
    _, d, run = min(options, key=lambda o: o[0])
    for robot in reversed(run):
        sim.step(robot, d)


# ---------------------------------------------------------------------------
# Transposition
# ---------------------------------------------------------------------------

def _transpose_instance(inst: Instance) -> Instance:
    robots = tuple(Robot(r.id, Point(r.start.y, r.start.x), Point(r.target.y, r.target.x)) for r in inst.robots)
    return Instance(GridDims(inst.dims.height, inst.dims.width), robots, inst.objective)


def _transpose_schedule(s: Schedule) -> Schedule:
    routes = tuple(
        Route(Point(r.start.y, r.start.x), "".join(_TRANSPOSE_MOVE[m] for m in r.moves)) for r in s.routes
    )
    return Schedule(s.horizon, routes)


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------

def _certify(inst: Instance, s: Schedule, case: str) -> CertifiedBound:
    k = inst.k
    return CertifiedBound(
        case=case,
        dist_min=dist_min(inst),
        total_length=traveled_length(s),
        length_bound=dist_min(inst) + LENGTH_OVERHEAD_C * k * k,
        turn_bound=3 * k + TURN_BOUND_C,
        turns=[turn_count(r) for r in s.routes],
    )


def construct_bounded_slack(inst: Instance, budget: Optional[int] = None) -> tuple[Optional[Schedule], CertifiedBound]:
    """
    Build a valid schedule with total length ≤ dist_min + C·k² and O(k) turns per robot.

    Returns
    -------
    (Schedule or None, CertifiedBound)
        None only for a single-line grid whose start and target orders differ
        (no schedule exists there).

    Raises
    ------
    DelegatedToExact
        Both sides are ≤ 4k; carries the exact solver's schedule.
    """
    from solvers.exact import solve_total_length

    k = inst.k
    w, h = inst.dims.width, inst.dims.height
    limit = 4 * k

    if w <= limit and h <= limit:
        cap = DELEGATION_HORIZON_FACTOR * k
        logger.warning("construct: %dx%d grid is within 4k=%d on both sides, delegating", w, h, limit)
        exact = solve_total_length(inst, budget=budget, horizon=cap)
        raise DelegatedToExact(exact, f"grid {w}x{h} has both sides <= 4k={limit}")

    if w > limit and h > limit:
        s = _construct_wide(inst)
        case = "wide"
    else:
        transposed = w <= limit
        work = _transpose_instance(inst) if transposed else inst
        if work.dims.height == 1:
            s = _construct_line(work)
            case = "line"
        else:
            s = _construct_strip(work)
            case = "strip"
        if s is not None and transposed:
            s = _transpose_schedule(s)

    if s is None:
        logger.info("construct: single-line instance with crossing order has no schedule")
        return None, CertifiedBound(case, dist_min(inst), 0, dist_min(inst) + LENGTH_OVERHEAD_C * k * k, 3 * k + TURN_BOUND_C)
    bound = _certify(inst, s, case)
    logger.info(
        "construct: case=%s length=%d dist_min=%d overhead=%d max_turns=%d",
        case, bound.total_length, bound.dist_min, bound.overhead, max(bound.turns, default=0),
    )
    return s, bound
