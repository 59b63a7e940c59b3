"""
solvers/exact.py
Exact reference solvers over joint robot configurations.

solve_makespan       : A* on configurations, h = max_i Δ(p_i, t_i), unit step cost.
solve_total_length   : A* with step cost = number of movers, h = Σ_i Δ(p_i, t_i).
min_turns_at_optimum : memoized exhaustive search for the fewest turns at the optimum.

The frontier is keyed by (f, g, move prefix) with moves ranked U<D<L<R<W, so among
equal-priority states the lexicographically smallest move tuple is expanded first.
"""

from __future__ import annotations

import heapq
import logging
from functools import lru_cache
from typing import Callable, Iterator, Optional, Union

from core.config import get_settings
from core.constants import MOVE_ORDER
from core.exceptions import ResourceLimit, TooLarge
from core.grid import GridDims, Instance, ObjectiveKind, Point, Route, Schedule, manhattan

logger = logging.getLogger(__name__)

Config = tuple[Point, ...]


# ---------------------------------------------------------------------------
# Transitions
# ---------------------------------------------------------------------------

def joint_moves(config: Config, dims: GridDims, allow_all_wait: bool = True) -> Iterator[tuple[str, Config]]:
    """
    All conflict-free joint moves from a configuration.

    Vertex and swap conflicts are pruned while the move tuple is being built.

    Yields
    ------
    (moves, next_config)
        moves is a string with one letter per robot.
    """
    k = len(config)
    chosen: list[str] = []
    nxt: list[Point] = []

    def extend(i: int) -> Iterator[tuple[str, Config]]:
        if i == k:
            if allow_all_wait or any(m != "W" for m in chosen):
                yield "".join(chosen), tuple(nxt)
            return
        p = config[i]
        for m in MOVE_ORDER:
            q = p.moved(m)
            if not dims.contains(q) or q in nxt:
                continue
            # swap with an already-assigned robot j: q == config[j] and nxt[j] == p
            if m != "W" and any(config[j] == q and nxt[j] == p for j in range(i)):
                continue
            chosen.append(m)
            nxt.append(q)
            yield from extend(i + 1)
            chosen.pop()
            nxt.pop()

    yield from extend(0)


def _schedule_from_path(starts: Config, steps: list[str]) -> Schedule:
    k = len(starts)
    routes = tuple(Route(starts[i], "".join(step[i] for step in steps)) for i in range(k))
    return Schedule(len(steps), routes)


def _unwind(parents: dict, goal: Config) -> list[str]:
    steps = []
    node = goal
    while parents[node] is not None:
        prev, moves = parents[node]
        steps.append(moves)
        node = prev
    steps.reverse()
    return steps


def _single_robot_route(start: Point, target: Point) -> Route:
    dx, dy = target.x - start.x, target.y - start.y
    moves = ("R" if dx > 0 else "L") * abs(dx) + ("U" if dy > 0 else "D") * abs(dy)
    return Route(start, moves)


def _bound_for(inst: Instance, kind: ObjectiveKind, bound: Optional[int]) -> Optional[int]:
    if bound is not None:
        return bound
    if inst.objective is not None and inst.objective.kind == kind:
        return inst.objective.bound
    return None


# ---------------------------------------------------------------------------
# Search
# ---------------------------------------------------------------------------

_RANK = str.maketrans(MOVE_ORDER, "01234")


def _astar(
    inst: Instance,
    h: Callable[[Config], int],
    step_cost: Callable[[str], int],
    bound: Optional[int],
    budget: int,
    allow_all_wait: bool,
    horizon: Optional[int],
    name: str,
) -> Optional[Schedule]:
    """
    A* over joint configurations, keyed (f, g, move prefix).

    The move prefix is every joint move so far, each letter ranked in U<D<L<R<W order,
    so among equal-(f, g) states the lexicographically smallest move tuple is expanded
    first, and a state reached twice at equal cost keeps the smaller prefix.
    With a horizon the state also carries the time step and no schedule may take
    more than horizon steps.
    """
    starts, targets = inst.starts, inst.targets

    def state_of(config: Config, t: int) -> tuple[Config, int]:
        return config, (t if horizon is not None else 0)

    def too_late(config: Config, t: int) -> bool:
        return horizon is not None and t + max(manhattan(p, q) for p, q in zip(config, targets)) > horizon

    root = state_of(starts, 0)
    if too_late(starts, 0):
        return None
    best: dict[tuple[Config, int], tuple[int, str]] = {root: (0, "")}
    parents: dict[tuple[Config, int], Optional[tuple[tuple[Config, int], str]]] = {root: None}
    frontier = [(h(starts), 0, "", 0, starts)]
    expanded = 0
    while frontier:
        f, g, key, t, config = heapq.heappop(frontier)
        state = state_of(config, t)
        if best[state] != (g, key):
            continue
        if config == targets:
            logger.info("%s: value %d after %d expansions", name, g, expanded)
            return _schedule_from_path(starts, _unwind(parents, state))
        expanded += 1
        if expanded > budget:
            raise ResourceLimit(expanded - 1, name)
        for moves, nxt in joint_moves(config, inst.dims, allow_all_wait=allow_all_wait):
            ng = g + step_cost(moves)
            nf = ng + h(nxt)
            if bound is not None and nf > bound:
                continue
            if too_late(nxt, t + 1):
                continue
            nkey = key + moves.translate(_RANK)
            nstate = state_of(nxt, t + 1)
            if nstate not in best or (ng, nkey) < best[nstate]:
                best[nstate] = (ng, nkey)
                parents[nstate] = (state, moves)
                heapq.heappush(frontier, (nf, ng, nkey, t + 1, nxt))
    logger.info("%s: no schedule within bound %s (%d expansions)", name, bound, expanded)
    return None


# ---------------------------------------------------------------------------
# Makespan
# ---------------------------------------------------------------------------

def solve_makespan(inst: Instance, bound: Optional[int] = None, budget: Optional[int] = None) -> Optional[Schedule]:
    """
    Minimum-horizon valid schedule, or None when no schedule meets the makespan bound.

    Parameters
    ----------
    inst : Instance
        The bound is read from a makespan objective unless passed explicitly.
    bound : int, optional
        ℓ; without one the search runs until the configuration space is exhausted.
    budget : int, optional
        Maximum number of expanded configurations (defaults to SEARCH_BUDGET).

    Raises
    ------
    ResourceLimit
        The budget ran out before the question was settled.
    """
    ell = _bound_for(inst, ObjectiveKind.MAKESPAN, bound)
    budget = get_settings().SEARCH_BUDGET if budget is None else budget
    starts, targets = inst.starts, inst.targets

    def h(config: Config) -> int:
        return max(manhattan(p, t) for p, t in zip(config, targets))

    if inst.k == 1:
        if ell is not None and h(starts) > ell:
            return None
        return Schedule.from_routes([_single_robot_route(starts[0], targets[0])])

    return _astar(inst, h, lambda moves: 1, ell, budget, True, None, "solve_makespan")


# ---------------------------------------------------------------------------
# Total traveled length
# ---------------------------------------------------------------------------

def solve_total_length(
    inst: Instance,
    bound: Optional[int] = None,
    budget: Optional[int] = None,
    horizon: Optional[int] = None,
) -> Optional[Schedule]:
    """
    Minimum total-length valid schedule, or None when it exceeds λ.

    Waits cost nothing and the all-wait step is never generated, so every step moves
    at least one robot and the horizon never exceeds the total length. A horizon caps
    the number of time steps independently of λ; the result is then the shortest
    schedule among those finishing within it.
    """
    lam = _bound_for(inst, ObjectiveKind.LENGTH, bound)
    budget = get_settings().SEARCH_BUDGET if budget is None else budget
    starts, targets = inst.starts, inst.targets

    def h(config: Config) -> int:
        return sum(manhattan(p, t) for p, t in zip(config, targets))

    if inst.k == 1:
        if lam is not None and h(starts) > lam:
            return None
        if horizon is not None and h(starts) > horizon:
            return None
        return Schedule.from_routes([_single_robot_route(starts[0], targets[0])])

    return _astar(
        inst, h, lambda moves: sum(1 for m in moves if m != "W"),
        lam, budget, False, horizon, "solve_total_length",
    )


# ---------------------------------------------------------------------------
# Turn oracle
# ---------------------------------------------------------------------------

def min_turns_at_optimum(
    inst: Instance,
    objective: Union[ObjectiveKind, str, None] = None,
    max_states: Optional[int] = None,
) -> Optional[int]:
    """
    Fewest total turns over all valid schedules that attain the optimal objective value.

    Test-only oracle for tiny instances. Returns None when the instance has no schedule
    within its bound.

    Raises
    ------
    TooLarge
        The memo table outgrew max_states (defaults to TURN_ORACLE_MAX_STATES).
    """
    if objective is None:
        objective = inst.objective.kind if inst.objective is not None else ObjectiveKind.MAKESPAN
    kind = ObjectiveKind(objective)
    max_states = get_settings().TURN_ORACLE_MAX_STATES if max_states is None else max_states

    if kind == ObjectiveKind.MAKESPAN:
        best = solve_makespan(inst)
        if best is None:
            return None
        budget_total = best.horizon
    else:
        best = solve_total_length(inst)
        if best is None:
            return None
        budget_total = sum(1 for r in best.routes for m in r.moves if m != "W")

    targets = inst.targets
    dims = inst.dims
    makespan = kind == ObjectiveKind.MAKESPAN
    INF = float("inf")

    @lru_cache(maxsize=None)
    def search(config: Config, last: tuple[str, ...], remaining: int) -> float:
        if search.cache_info().currsize > max_states:
            raise TooLarge(f"turn oracle exceeded {max_states} states")
        if makespan:
            if remaining == 0:
                return 0 if config == targets else INF
            if max(manhattan(p, t) for p, t in zip(config, targets)) > remaining:
                return INF
        else:
            if config == targets:
                return 0
            if sum(manhattan(p, t) for p, t in zip(config, targets)) > remaining:
                return INF
        best_turns = INF
        for moves, nxt in joint_moves(config, dims, allow_all_wait=makespan):
            cost = 1 if makespan else sum(1 for m in moves if m != "W")
            if cost > remaining:
                continue
            added = 0
            new_last = list(last)
            for i, m in enumerate(moves):
                if m == "W":
                    continue
                if last[i] and last[i] != m:
                    added += 1
                new_last[i] = m
            sub = search(nxt, tuple(new_last), remaining - cost)
            best_turns = min(best_turns, added + sub)
        return best_turns

    try:
        value = search(inst.starts, tuple("" for _ in inst.robots), budget_total)
    finally:
        search.cache_clear()
    return None if value == INF else int(value)
