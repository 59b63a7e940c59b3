"""
analysis/flatten.py
Cell flattening and the greedy turn-minimization pass built on it.
"""

from __future__ import annotations

import logging
from typing import Optional

from analysis.turns import TurnKind, total_turns, turn_count, turns
from core.exceptions import NotACell
from core.grid import Route, Schedule, conflict_between

logger = logging.getLogger(__name__)


def _flatten_route(route: Route, turn_index: int) -> Route:
    ts = turns(route)
    if not 0 <= turn_index < len(ts):
        raise NotACell(f"turn index {turn_index} out of range, route has {len(ts)} turns")
    turn = ts[turn_index]
    if turn.kind == TurnKind.UTURN:
        raise NotACell(f"turn {turn_index} at time {turn.index} is a U-turn")

    lo = ts[turn_index - 1].index if turn_index > 0 else 0
    hi = ts[turn_index + 1].index if turn_index + 1 < len(ts) else route.horizon
    window = route.moves[lo:hi]
    n_in = window.count(turn.incoming)
    n_out = window.count(turn.outgoing)
    mirrored = iter(turn.outgoing * n_out + turn.incoming * n_in)
    new_window = "".join(m if m == "W" else next(mirrored) for m in window)
    return Route(route.start, route.moves[:lo] + new_window + route.moves[hi:])


def flatten_cell(s: Schedule, robot: int, turn_index: int) -> Optional[Schedule]:
    """
    Replace the elbow at a turn by the mirrored elbow through the opposite corner.

    The elbow spans from the previous turn (or the start) to the next turn (or the
    end); moves are reordered so the outgoing direction comes first while waits keep
    their time slots. Endpoints, horizon and traveled length are unchanged, and the
    mirrored elbow stays inside the bounding box of the original one, so it never
    leaves a grid the original route lies in.

    Returns
    -------
    Schedule or None
        None when the mirrored route conflicts with another route.
    """
    new_route = _flatten_route(s.routes[robot], turn_index)
    pts = new_route.positions()
    for j, other in enumerate(s.routes):
        if j != robot and conflict_between(pts, other.positions()) is not None:
            return None
    return s.replace_route(robot, new_route)


def minimize_turns(s: Schedule) -> Schedule:
    """
    Greedy descent: apply the first flattening (robot id, then turn index) that lowers
    that robot's turn count, and repeat until none does.
    """
    current = s
    improved = True
    rounds = 0
    while improved:
        improved = False
        for robot, route in enumerate(current.routes):
            before = turn_count(route)
            for ti, t in enumerate(turns(route)):
                if t.kind == TurnKind.UTURN:
                    continue
                candidate = flatten_cell(current, robot, ti)
                if candidate is not None and turn_count(candidate.routes[robot]) < before:
                    current = candidate
                    improved = True
                    break
            if improved:
                break
        rounds += 1
    logger.debug("minimize_turns: %d -> %d turns in %d round(s)", total_turns(s), total_turns(current), rounds)
    return current
