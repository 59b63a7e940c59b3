"""
analysis/turns.py
Turns, monotone runs and their rectangles.

Waits are transparent: a turn compares the last motion before a wait block
with the first motion after it, so inserting waits never changes ν(W).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

from core.constants import REVERSE_MOVE
from core.exceptions import BadInterval
from core.grid import Point, Route, Schedule, slack


class TurnKind(str, Enum):
    CORNER = "corner"
    UTURN = "uturn"


@dataclass(frozen=True)
class Turn:
    index: int        # time of the turn vertex u_i (the outgoing move starts here)
    point: Point
    incoming: str     # last motion before the turn
    outgoing: str     # first motion after the turn
    kind: TurnKind

    @property
    def direction(self) -> tuple[str, str]:
        return (self.incoming, self.outgoing)


@dataclass(frozen=True)
class MonotoneRun:
    robot: int
    first: int                            # position in the route's turn list
    last: int                             # inclusive
    directions: tuple[tuple[str, str], ...]  # one or two alternating turn directions


@dataclass(frozen=True)
class Rect:
    lo: Point   # min-x / min-y corner
    hi: Point

    @classmethod
    def spanning(cls, p: Point, q: Point) -> "Rect":
        return cls(Point(min(p.x, q.x), min(p.y, q.y)), Point(max(p.x, q.x), max(p.y, q.y)))

    def contains(self, p: Point) -> bool:
        return self.lo.x <= p.x <= self.hi.x and self.lo.y <= p.y <= self.hi.y


def _check_interval(r: Route, t1: int, t2: Optional[int]) -> int:
    t2 = r.horizon if t2 is None else t2
    if t1 < 0 or t1 > t2 or t2 > r.horizon:
        raise BadInterval(f"interval [{t1}, {t2}] is not inside [0, {r.horizon}]")
    return t2


def turns(r: Route, t1: int = 0, t2: Optional[int] = None) -> list[Turn]:
    """All turns the route makes inside [t1, t2]; ν is the length of the result."""
    t2 = _check_interval(r, t1, t2)
    pts = r.positions()
    out: list[Turn] = []
    last: Optional[str] = None
    for step in range(t1, t2):
        m = r.moves[step]
        if m == "W":
            continue
        if last is not None and m != last:
            kind = TurnKind.UTURN if m == REVERSE_MOVE[last] else TurnKind.CORNER
            out.append(Turn(step, pts[step], last, m, kind))
        last = m
    return out


def turn_count(r: Route, t1: int = 0, t2: Optional[int] = None) -> int:
    return len(turns(r, t1, t2))


def total_turns(s: Schedule) -> int:
    return sum(turn_count(r) for r in s.routes)


def monotone_runs(r: Route, robot: int = 0) -> list[MonotoneRun]:
    """
    Greedy maximal decomposition of the turn sequence into monotone runs.

    A turn extends the current run when it repeats the direction of the turn two
    places earlier; U-turns always stand alone.
    """
    ts = turns(r)
    runs: list[MonotoneRun] = []
    i = 0
    while i < len(ts):
        j = i
        if ts[i].kind != TurnKind.UTURN:
            while j + 1 < len(ts) and ts[j + 1].kind != TurnKind.UTURN:
                nxt = j + 1
                if nxt - 2 >= i and ts[nxt].direction != ts[nxt - 2].direction:
                    break
                j = nxt
        dirs = tuple(dict.fromkeys(t.direction for t in ts[i:j + 1]))
        runs.append(MonotoneRun(robot, i, j, dirs))
        i = j + 1
    return runs


def is_monotone(ts: Sequence[Turn]) -> bool:
    """Definition check: both alternating subsequences keep a single direction."""
    return all(ts[p].direction == ts[p - 2].direction for p in range(2, len(ts)))


def run_rectangle(r: Route, run: MonotoneRun) -> Rect:
    """rectangle(M): spanned by the first and last turn vertices of the run."""
    ts = turns(r)
    return Rect.spanning(ts[run.first].point, ts[run.last].point)


def _directions_used(r: Route, t1: int, t2: int) -> set[str]:
    return {m for m in r.moves[t1:t2] if m != "W"}


def is_good_rectangle(
    s: Schedule,
    robot: int,
    run: MonotoneRun,
    t1: int,
    t2: int,
    sigma: int,
) -> bool:
    """
    Goodness of rectangle(M) w.r.t. σ and the window [t1, t2].

    (i) the same robots are inside the rectangle at every step of the window;
    (ii) each of them has slack ≥ σ over the window;
    (iii) each moves only in the directions of the run's turns;
    (iv) each makes at least σ turns in the window.
    """
    route = s.routes[robot]
    rect = run_rectangle(route, run)
    run_dirs = {d for pair in run.directions for d in pair}
    expanded = [rt.positions() for rt in s.routes]

    present = {i for i, pts in enumerate(expanded) if rect.contains(pts[t1])}
    for step in range(t1, t2 + 1):
        if {i for i, pts in enumerate(expanded) if rect.contains(pts[step])} != present:
            return False
    for i in present:
        rt = s.routes[i]
        if slack(rt, t1, t2) < sigma:
            return False
        if not _directions_used(rt, t1, t2) <= run_dirs:
            return False
        if turn_count(rt, t1, t2) < sigma:
            return False
    return True


def tau_bound(k: int, sigma: Optional[int] = None) -> int:
    """τ(k) = 3·k^k·(σ+1) + σ, with σ defaulting to 4k²."""
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    sigma = 4 * k * k if sigma is None else sigma
    return 3 * k ** k * (sigma + 1) + sigma
