"""
snapshot/extract.py
Contract an organized schedule into a snapshot plus the witness that undoes the contraction.

Coordinates holding a rest or important vertex stay; every other row and column is
contracted into the active coordinate below/left of it (or deleted when it lies below
the first active one). Index conventions for the expansion counts:

    w_right[0]      columns left of the first active column
    w_right[z + 1]  columns contracted after active column z (0-based)

so len(w_right) == snapshot width + 1, and likewise w_down over rows.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Optional

from core.exceptions import NotOrganized
from core.grid import GridDims, Instance, Point, Schedule, move_between
from snapshot.organize import important_and_rest

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Snapshot:
    dims_snap: GridDims
    pairs: tuple[tuple[Point, Point], ...]      # (s'_i, t'_i) in snapshot coordinates
    routes_snap: tuple[str, ...]                # wait-free move strings
    iota: dict[Point, list[int]] = field(default_factory=dict)

    def visits_of(self, robot: int) -> list[Point]:
        """Snapshot vertices robot enters, in order, starting with its start vertex."""
        out = [self.pairs[robot][0]]
        for m in self.routes_snap[robot]:
            out.append(out[-1].moved(m))
        return out


@dataclass
class Witness:
    w_down: list[int]                                        # per row gap, len = rows + 1
    w_right: list[int]                                       # per column gap, len = cols + 1
    waits: dict[tuple[Point, int], int] = field(default_factory=dict)   # (v, q) -> steps

    def wait(self, v: Point, q: int) -> int:
        return self.waits.get((v, q), 0)


def _gaps(active: list[int], size: int) -> list[int]:
    gaps = [active[0]]
    for a, b in zip(active, active[1:]):
        gaps.append(b - a - 1)
    gaps.append(size - 1 - active[-1])
    return gaps


def expand_coords(gaps: list[int]) -> list[int]:
    """Real coordinates of the active lines, from a gap vector."""
    out = []
    pos = gaps[0]
    for z in range(len(gaps) - 1):
        out.append(pos)
        pos += 1 + gaps[z + 1]
    return out


def extract_snapshot(inst: Instance, s: Schedule) -> tuple[Snapshot, Witness]:
    """
    Snapshot of an organized schedule and the witness recovering it.

    The final visit of each robot to its target carries wait 0: trailing waits are
    not part of the snapshot.

    Raises
    ------
    NotOrganized
        A robot waits on a vertex that the contraction removes.
    """
    marks = important_and_rest(inst, s)
    cols = sorted({p.x for p in marks.rest})
    rows = sorted({p.y for p in marks.rest})
    col_index = {x: z for z, x in enumerate(cols)}
    row_index = {y: z for z, y in enumerate(rows)}

    def snap(p: Point) -> Optional[Point]:
        if p.x in col_index and p.y in row_index:
            return Point(col_index[p.x], row_index[p.y])
        return None

    # Every entry into a kept vertex, tagged with its time, per robot.
    entries: list[list[tuple[int, Point, int]]] = []   # (arrival, snapshot vertex, wait)
    for robot, route in enumerate(s.routes):
        pts = route.positions()
        seq: list[tuple[int, Point, int]] = []
        for t, p in enumerate(pts):
            v = snap(p)
            entering = t == 0 or pts[t - 1] != p
            if t > 0 and not entering:
                if v is None:
                    raise NotOrganized(f"robot {robot} waits at {p} at time {t - 1}, which is contracted")
                arrival, vv, w = seq[-1]
                seq[-1] = (arrival, vv, w + 1)
                continue
            if v is not None:
                seq.append((t, v, 0))
        # trailing waits belong to no visit
        arrival, vv, _ = seq[-1]
        seq[-1] = (arrival, vv, 0)
        entries.append(seq)

    ordered = sorted(
        (arrival, robot, v) for robot, seq in enumerate(entries) for arrival, v, _ in seq
    )
    iota: dict[Point, list[int]] = {}
    for _, robot, v in ordered:
        iota.setdefault(v, []).append(robot)

    occurrence: dict[tuple[int, Point], int] = {}
    waits: dict[tuple[Point, int], int] = {}
    routes_snap = []
    for robot, seq in enumerate(entries):
        moves = []
        for idx, (_, v, w) in enumerate(seq):
            nth = occurrence.get((robot, v), 0)
            occurrence[(robot, v)] = nth + 1
            q = _nth_index(iota[v], robot, nth)
            if w:
                waits[(v, q)] = w
            if idx > 0:
                moves.append(move_between(seq[idx - 1][1], v))
        routes_snap.append("".join(moves))

    pairs = tuple((snap(r.start), snap(r.target)) for r in inst.robots)
    snapshot = Snapshot(GridDims(len(cols), len(rows)), pairs, tuple(routes_snap), iota)
    witness = Witness(_gaps(rows, inst.dims.height), _gaps(cols, inst.dims.width), waits)
    logger.debug(
        "extract_snapshot: %dx%d -> %dx%d, %d wait entries",
        inst.dims.width, inst.dims.height, len(cols), len(rows), len(waits),
    )
    return snapshot, witness


def _nth_index(visitors: list[int], robot: int, nth: int) -> int:
    seen = -1
    for q, r in enumerate(visitors):
        if r == robot:
            seen += 1
            if seen == nth:
                return q
    raise ValueError(f"robot {robot} has no visit #{nth}")


def snapshot_side_bound(important_coords: int, k: int) -> int:
    """Each important coordinate keeps itself and up to k rest coordinates on either side."""
    return important_coords * (2 * k + 1)
