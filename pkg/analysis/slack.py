"""
analysis/slack.py
Wait/travel slack, slack partitions and good-interval search.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Union

from analysis.turns import tau_bound, turn_count
from core.exceptions import BadInterval, NonMonotoneH
from core.grid import Route, Schedule, manhattan, slack

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SlackPartition:
    small: frozenset[int]           # R_S
    large: frozenset[int]           # R_L
    threshold: Optional[int] = None  # j for slack_partition; None for good intervals


@dataclass(frozen=True)
class AllSmall:
    bound: int   # h^(k)(k)


@dataclass(frozen=True)
class Gap:
    partition: SlackPartition


@dataclass(frozen=True)
class NoGap:
    """Slacks exceed h^(k)(k) but every band between consecutive iterates is occupied."""
    iterates: tuple[int, ...]


PartitionResult = Union[AllSmall, Gap, NoGap]


# ---------------------------------------------------------------------------
# Wait / travel split
# ---------------------------------------------------------------------------

def wait_travel_slack(r: Route, t1: int = 0, t2: Optional[int] = None) -> tuple[int, int]:
    """
    Split slack over [t1, t2] into stationary steps and detour.

    Returns
    -------
    tuple[int, int]
        (wait, travel) with wait + travel = slack(r, t1, t2).
    """
    t2 = r.horizon if t2 is None else t2
    total = slack(r, t1, t2)
    wait = r.moves[t1:t2].count("W")
    return wait, total - wait


# ---------------------------------------------------------------------------
# Slack partition
# ---------------------------------------------------------------------------

def h_iterates(h: Callable[[int], int], k: int) -> list[int]:
    """[h^(1)(k), …, h^(k)(k)]; raises NonMonotoneH if the sequence ever decreases."""
    values = []
    x = k
    for _ in range(k):
        x = h(x)
        if values and x < values[-1]:
            raise NonMonotoneH(f"h iterates must not decrease, got {values[-1]} then {x}")
        values.append(x)
    return values


def slack_partition(slacks: Sequence[int], h: Callable[[int], int], k: int) -> PartitionResult:
    """
    Either every slack is ≤ h^(k)(k), or the smallest j ∈ [2, k] splitting the robots
    into small (≤ h^(j−1)(k)) and large (> h^(j)(k)).
    """
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    it = h_iterates(h, k)
    if all(s <= it[-1] for s in slacks):
        return AllSmall(it[-1])
    for j in range(2, k + 1):
        lo, hi = it[j - 2], it[j - 1]
        small = frozenset(i for i, s in enumerate(slacks) if s <= lo)
        large = frozenset(i for i, s in enumerate(slacks) if s > hi)
        if len(small) + len(large) == len(slacks):
            return Gap(SlackPartition(small, large, j))
    logger.debug("No slack gap for slacks=%s iterates=%s", list(slacks), it)
    return NoGap(tuple(it))


# ---------------------------------------------------------------------------
# Good intervals
# ---------------------------------------------------------------------------

def _partition_interval(s: Schedule, t1: int, t2: int, sigma: int, gamma: int) -> Optional[SlackPartition]:
    small, large = set(), set()
    for i, r in enumerate(s.routes):
        sl = slack(r, t1, t2)
        if sl <= sigma:
            small.add(i)
        elif sl >= gamma:
            large.add(i)
        else:
            return None
    if not large:
        return None
    return SlackPartition(frozenset(small), frozenset(large))


def check_good_interval(
    s: Schedule, t1: int, t2: int, part: SlackPartition, sigma: int, gamma: int, d: int,
) -> bool:
    """Independent evaluator of the four good-interval conditions for a given split."""
    k = len(s.routes)
    if t1 < 0 or t1 >= t2 or t2 > s.horizon:
        raise BadInterval(f"interval [{t1}, {t2}] is not inside [0, {s.horizon}]")
    if part.small | part.large != frozenset(range(k)) or part.small & part.large:
        return False
    if not part.large:
        return False
    if any(slack(s.routes[i], t1, t2) > sigma for i in part.small):
        return False
    if any(slack(s.routes[i], t1, t2) < gamma for i in part.large):
        return False
    pts = [r.positions() for r in s.routes]
    for step in range(t1, t2 + 1):
        for a in part.small:
            for b in part.large:
                if manhattan(pts[a][step], pts[b][step]) < d:
                    return False
    threshold = tau_bound(k, sigma)
    return any(turn_count(s.routes[i], t1, t2) > threshold for i in part.large)


def good_intervals(s: Schedule, sigma: int, gamma: int, d: int) -> list[tuple[tuple[int, int], SlackPartition]]:
    """
    Every [σ, γ]-good interval of a schedule w.r.t. distance d.

    Robots must split strictly into slack ≤ σ and slack ≥ γ; small and large robots
    stay ≥ d apart at every step; some large robot makes more than 3k^k(σ+1)+σ turns.
    """
    if sigma >= gamma:
        raise ValueError(f"sigma must be smaller than gamma, got {sigma} >= {gamma}")
    k = len(s.routes)
    threshold = tau_bound(k, sigma)
    pts = [r.positions() for r in s.routes]
    found = []
    for t1 in range(s.horizon):
        for t2 in range(t1 + 1, s.horizon + 1):
            part = _partition_interval(s, t1, t2, sigma, gamma)
            if part is None:
                continue
            if not any(turn_count(s.routes[i], t1, t2) > threshold for i in part.large):
                continue
            far = all(
                manhattan(pts[a][step], pts[b][step]) >= d
                for step in range(t1, t2 + 1)
                for a in part.small
                for b in part.large
            )
            if far:
                found.append(((t1, t2), part))
    logger.debug("good_intervals: %d interval(s) for sigma=%d gamma=%d d=%d", len(found), sigma, gamma, d)
    return found
