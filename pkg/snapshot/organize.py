"""
snapshot/organize.py
Important and rest vertices, and the wait-postponing pass that makes a schedule organized.

A schedule is organized when every wait happens on an important or rest vertex.
"""

from __future__ import annotations

import logging
from typing import NamedTuple, Optional

from analysis.turns import turns
from core.exceptions import OrganizeFailed
from core.grid import Instance, Point, Route, Schedule, validate_schedule

logger = logging.getLogger(__name__)


class Landmarks(NamedTuple):
    coords: tuple[frozenset[int], frozenset[int]]   # important x, important y
    important: frozenset[Point]
    rest: frozenset[Point]                           # always contains important


def important_and_rest(inst: Instance, s: Schedule) -> Landmarks:
    """
    Mark coordinates holding a turn, a start or a target as important.

    Important vertices are the crossings of important x and y coordinates; rest
    vertices are reachable from one of them by a straight run of at most k steps.
    """
    xs: set[int] = set()
    ys: set[int] = set()
    for robot, route in zip(inst.robots, s.routes):
        for p in (robot.start, robot.target):
            xs.add(p.x)
            ys.add(p.y)
        for t in turns(route):
            xs.add(t.point.x)
            ys.add(t.point.y)

    important = frozenset(Point(x, y) for x in xs for y in ys if inst.dims.contains(Point(x, y)))
    rest = set(important)
    for v in important:
        for d in range(1, inst.k + 1):
            for p in (v.offset(d, 0), v.offset(-d, 0), v.offset(0, d), v.offset(0, -d)):
                if inst.dims.contains(p):
                    rest.add(p)
    return Landmarks((frozenset(xs), frozenset(ys)), important, frozenset(rest))


def _stray_wait(s: Schedule, rest: frozenset[Point]) -> Optional[tuple[int, int]]:
    """(robot, time) of the last wait in the first wait block sitting off the rest set."""
    for robot, route in enumerate(s.routes):
        pts = route.positions()
        for t, m in enumerate(route.moves):
            if m == "W" and pts[t] not in rest:
                end = t
                while end + 1 < route.horizon and route.moves[end + 1] == "W":
                    end += 1
                return robot, end
    return None


def is_organized(inst: Instance, s: Schedule) -> bool:
    return _stray_wait(s, important_and_rest(inst, s).rest) is None


def organize(inst: Instance, s: Schedule) -> Schedule:
    """
    Postpone every wait that sits off the important and rest vertices.

    A robot waiting on a non-rest vertex is mid-straightaway, so it moves on in its
    direction right after the wait block. The maximal chain of robots lined up ahead
    of it swaps its wait and its move together, which pushes the wait one cell along.
    Horizon, traveled length and the visit order are unchanged.
    """
    if not validate_schedule(inst.with_objective(None), s).valid:
        raise ValueError("organize needs a valid schedule")
    rest = important_and_rest(inst, s).rest
    moves = [list(r.moves) for r in s.routes]
    cap = (s.horizon + 1) * s.horizon * inst.k + 1
    swaps = 0

    current = s
    while True:
        stray = _stray_wait(current, rest)
        if stray is None:
            break
        swaps += 1
        if swaps > cap:
            raise OrganizeFailed(f"organize did not settle within {cap} swaps")
        robot, i = stray
        if i + 1 >= current.horizon or moves[robot][i + 1] == "W":
            raise OrganizeFailed(f"robot {robot} waits off the rest set at time {i} and never moves on")
        direction = moves[robot][i + 1]

        at = {r.positions()[i + 1]: j for j, r in enumerate(current.routes)}
        chain = [robot]
        p = current.routes[robot].positions()[i + 1].moved(direction)
        while p in at:
            chain.append(at[p])
            p = p.moved(direction)
        for j in chain:
            if moves[j][i] != "W" or moves[j][i + 1] != direction:
                raise OrganizeFailed(f"robot {j} breaks the co-moving chain at time {i}")
            moves[j][i], moves[j][i + 1] = direction, "W"
        current = Schedule(s.horizon, tuple(
            Route(r.start, "".join(ms)) for r, ms in zip(s.routes, moves)
        ))

    if swaps:
        logger.debug("organize: %d swap(s)", swaps)
    if not validate_schedule(inst.with_objective(None), current).valid:
        raise OrganizeFailed("organize produced an invalid schedule")
    return current
