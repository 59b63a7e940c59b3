"""
snapshot/witness.py
Witness constraints (timing, size, traffic), reconstruction, and a tiny exhaustive
witness search used by the tests to go from a snapshot back to a schedule.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Iterator, Optional

from core.exceptions import InconsistentWitness
from core.grid import Instance, Point, Route, Schedule, validate_schedule
from snapshot.extract import Snapshot, Witness, expand_coords

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Visit:
    robot: int
    vertex: Point       # snapshot coordinates
    q: int              # position in iota(vertex)
    arrival: int
    wait: int


@dataclass(frozen=True)
class ConstraintViolation:
    family: str         # "nonnegative" | "size" | "timing" | "traffic" | "iota"
    detail: str


@dataclass
class ConstraintReport:
    violations: list[ConstraintViolation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def families(self) -> set[str]:
        return {v.family for v in self.violations}


def _step_cost(w: Witness, at: Point, move: str) -> int:
    """Time to cross one snapshot edge: the contracted lines plus one."""
    if move == "R":
        return w.w_right[at.x + 1] + 1
    if move == "L":
        return w.w_right[at.x] + 1
    if move == "U":
        return w.w_down[at.y + 1] + 1
    return w.w_down[at.y] + 1


def visits(snap: Snapshot, w: Witness) -> list[list[Visit]]:
    """
    Every robot's visits with arrival times summed from waits and edge crossings.

    The m-th visit of robot i to v is the m-th occurrence of i in iota(v).

    Raises
    ------
    InconsistentWitness
        A route visits a vertex more often than iota records.
    """
    out = []
    for robot, route in enumerate(snap.routes_snap):
        seen: dict[Point, int] = {}
        seq = []
        t = 0
        v = snap.pairs[robot][0]
        for step in range(len(route) + 1):
            nth = seen.get(v, 0)
            seen[v] = nth + 1
            owners = [q for q, r in enumerate(snap.iota.get(v, [])) if r == robot]
            if nth >= len(owners):
                raise InconsistentWitness(f"robot {robot} visits {v} more often than iota records")
            q = owners[nth]
            wait = w.wait(v, q)
            seq.append(Visit(robot, v, q, t, wait))
            if step == len(route):
                break
            t += wait + _step_cost(w, v, route[step])
            v = v.moved(route[step])
        out.append(seq)
    return out


def check_witness(inst: Instance, snap: Snapshot, w: Witness, ell: int) -> ConstraintReport:
    """Evaluate non-negativity, size, timing and traffic constraints; report every violation."""
    report = ConstraintReport()
    bad = report.violations

    for name, values in (("w_down", w.w_down), ("w_right", w.w_right)):
        for z, value in enumerate(values):
            if value < 0:
                bad.append(ConstraintViolation("nonnegative", f"{name}[{z}] = {value}"))
    for (v, q), value in w.waits.items():
        if value < 0:
            bad.append(ConstraintViolation("nonnegative", f"wait at {v.as_list()} visit {q} = {value}"))

    rows, cols = snap.dims_snap.height, snap.dims_snap.width
    if len(w.w_down) != rows + 1 or rows + sum(w.w_down) != inst.dims.height:
        bad.append(ConstraintViolation(
            "size", f"{rows} rows + {sum(w.w_down)} contracted != grid height {inst.dims.height}",
        ))
    if len(w.w_right) != cols + 1 or cols + sum(w.w_right) != inst.dims.width:
        bad.append(ConstraintViolation(
            "size", f"{cols} columns + {sum(w.w_right)} contracted != grid width {inst.dims.width}",
        ))
    if "size" in report.families():
        return report

    try:
        seqs = visits(snap, w)
    except InconsistentWitness as exc:
        bad.append(ConstraintViolation("iota", str(exc)))
        return report

    for robot, seq in enumerate(seqs):
        last = seq[-1]
        if last.arrival > ell:
            bad.append(ConstraintViolation("timing", f"robot {robot} reaches its target at {last.arrival} > {ell}"))

    by_slot = {(v.vertex, v.q): v for seq in seqs for v in seq}
    for vertex, visitors in snap.iota.items():
        for q in range(len(visitors) - 1):
            a, b = by_slot.get((vertex, q)), by_slot.get((vertex, q + 1))
            if a is None or b is None:
                bad.append(ConstraintViolation("iota", f"visit {q} at {vertex.as_list()} is never made"))
                continue
            if a.arrival + a.wait >= b.arrival:
                bad.append(ConstraintViolation(
                    "traffic",
                    f"at {vertex.as_list()} robot {a.robot} leaves at {a.arrival + a.wait + 1}, "
                    f"robot {b.robot} arrives at {b.arrival}",
                ))
    return report


def reconstruct(inst: Instance, snap: Snapshot, w: Witness) -> Schedule:
    """
    Decompress the snapshot: stretch every edge by its contracted lines and insert waits.

    Raises
    ------
    InconsistentWitness
        The stretched routes do not start where the robots stand, or the resulting
        schedule is invalid although the constraints were checked.
    """
    xs = expand_coords(w.w_right)
    ys = expand_coords(w.w_down)
    seqs = visits(snap, w)

    routes = []
    for robot, (seq, route) in enumerate(zip(seqs, snap.routes_snap)):
        s0 = snap.pairs[robot][0]
        start = Point(xs[s0.x], ys[s0.y])
        if start != inst.robots[robot].start:
            raise InconsistentWitness(f"robot {robot} would start at {start}, scenario says {inst.robots[robot].start}")
        parts = []
        for visit, m in zip(seq, route):
            parts.append("W" * visit.wait)
            parts.append(m * _step_cost(w, visit.vertex, m))
        routes.append(Route(start, "".join(parts)))

    s = Schedule.from_routes(routes)
    report = validate_schedule(inst.with_objective(None), s)
    if not report.valid:
        raise InconsistentWitness(f"reconstructed schedule is invalid: {next(iter(report.violations().values()))}")
    return s


# ---------------------------------------------------------------------------
# Exhaustive witness search (test-only)
# ---------------------------------------------------------------------------

def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """Ordered ways to write total as a sum of `parts` non-negative integers."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def enumerate_witnesses(inst: Instance, snap: Snapshot, ell: int, wait_cap: int = 2) -> Optional[Witness]:
    """
    First witness, in lexicographic order of (w_down, w_right, waits), that passes
    check_witness and reconstructs into a valid schedule. Waits range over 0..wait_cap
    on every non-final visit. Only sensible for toy snapshots.
    """
    rows, cols = snap.dims_snap.height, snap.dims_snap.width
    slots = []
    for robot, visited in enumerate(snap.visits_of(r) for r in range(len(snap.routes_snap))):
        seen: dict[Point, int] = {}
        for v in visited[:-1]:
            nth = seen.get(v, 0)
            seen[v] = nth + 1
            owners = [q for q, r in enumerate(snap.iota.get(v, [])) if r == robot]
            if nth < len(owners):
                slots.append((v, owners[nth]))
    slots.sort()

    tried = 0
    for w_down in _compositions(inst.dims.height - rows, rows + 1):
        for w_right in _compositions(inst.dims.width - cols, cols + 1):
            for values in itertools.product(range(wait_cap + 1), repeat=len(slots)):
                tried += 1
                waits = {slot: value for slot, value in zip(slots, values) if value}
                w = Witness(list(w_down), list(w_right), waits)
                if not check_witness(inst, snap, w, ell).ok:
                    continue
                try:
                    reconstruct(inst, snap, w)
                except InconsistentWitness:
                    continue
                logger.debug("enumerate_witnesses: found after %d candidate(s)", tried)
                return w
    logger.debug("enumerate_witnesses: none among %d candidate(s)", tried)
    return None
