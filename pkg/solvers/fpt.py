"""
solvers/fpt.py
Exhaustive-branching CMP-L solver parameterized by λ.

Every route has horizon λ. The branching assigns routes robot by robot: a robot must act
if it has s ≠ t, or if it is stationary and an assigned route passes over its start.
A node succeeds when no robot is left that must act; the remaining robots stay put.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

from core.constants import MOVE_ORDER
from core.grid import GridDims, Instance, ObjectiveKind, Point, Route, Schedule, conflict_between, manhattan

logger = logging.getLogger(__name__)


@dataclass
class BranchStats:
    """Instrumentation of one solve: nodes visited, deepest branch, widest fan-out."""
    nodes: int = 0
    max_depth: int = 0      # number of assigned robots at the deepest node
    max_fanout: int = 0     # children generated at a single node

    def merge(self, other: "BranchStats") -> None:
        self.nodes += other.nodes
        self.max_depth = max(self.max_depth, other.max_depth)
        self.max_fanout = max(self.max_fanout, other.max_fanout)


@dataclass
class _Node:
    assigned: dict[int, Route] = field(default_factory=dict)
    expanded: dict[int, list[Point]] = field(default_factory=dict)
    length: int = 0


# ---------------------------------------------------------------------------
# Route enumeration
# ---------------------------------------------------------------------------

def enumerate_routes(start: Point, target: Point, lam: int, dims: GridDims) -> list[Route]:
    """
    All horizon-λ move strings from start to target that stay inside the grid.

    Returned in lexicographic order over U<D<L<R<W; at most 5^λ of them.
    """
    if lam < 0:
        raise ValueError(f"lambda must be non-negative, got {lam}")
    out: list[Route] = []
    moves: list[str] = []

    def dfs(pos: Point, remaining: int) -> None:
        if manhattan(pos, target) > remaining:
            return
        if remaining == 0:
            out.append(Route(start, "".join(moves)))
            return
        for m in MOVE_ORDER:
            q = pos.moved(m)
            if dims.contains(q):
                moves.append(m)
                dfs(q, remaining - 1)
                moves.pop()

    if dims.contains(start):
        dfs(start, lam)
    return out


def _moving_length(r: Route) -> int:
    return sum(1 for m in r.moves if m != "W")


# ---------------------------------------------------------------------------
# Branching
# ---------------------------------------------------------------------------

class _Brancher:
    def __init__(self, inst: Instance, lam: int):
        self.inst = inst
        self.lam = lam
        self.routes: dict[int, list[Route]] = {}

    def candidates(self, idx: int) -> list[Route]:
        if idx not in self.routes:
            robot = self.inst.robots[idx]
            self.routes[idx] = enumerate_routes(robot.start, robot.target, self.lam, self.inst.dims)
        return self.routes[idx]

    def next_robot(self, node: _Node) -> Optional[int]:
        """Lowest index that must act: unassigned with s ≠ t, or stationary and stepped on."""
        visited = {p for pts in node.expanded.values() for p in pts}
        for idx, robot in enumerate(self.inst.robots):
            if idx in node.assigned:
                continue
            if robot.start != robot.target or robot.start in visited:
                return idx
        return None

    def children(self, node: _Node, idx: int) -> list[_Node]:
        kids = []
        for route in self.candidates(idx):
            length = node.length + _moving_length(route)
            if length > self.lam:
                continue
            pts = route.positions()
            if any(conflict_between(pts, other) is not None for other in node.expanded.values()):
                continue
            assigned = dict(node.assigned)
            assigned[idx] = route
            expanded = dict(node.expanded)
            expanded[idx] = pts
            kids.append(_Node(assigned, expanded, length))
        return kids

    def search(self, node: _Node, stats: BranchStats) -> Optional[_Node]:
        stats.nodes += 1
        stats.max_depth = max(stats.max_depth, len(node.assigned))
        idx = self.next_robot(node)
        if idx is None:
            return node
        kids = self.children(node, idx)
        stats.max_fanout = max(stats.max_fanout, len(kids))
        for kid in kids:
            found = self.search(kid, stats)
            if found is not None:
                return found
        return None


def _to_schedule(inst: Instance, node: _Node) -> Schedule:
    routes = [node.assigned[i].trimmed() if i in node.assigned else Route(r.start) for i, r in enumerate(inst.robots)]
    return Schedule.from_routes(routes)


def solve_length_fpt(
    inst: Instance,
    lam: Optional[int] = None,
    threads: int = 1,
    stats: Optional[BranchStats] = None,
) -> Optional[Schedule]:
    """
    Decide CMP-L by exhaustive branching over horizon-λ routes.

    Parameters
    ----------
    inst : Instance
        λ is read from a length objective unless passed explicitly.
    threads : int
        Root subtrees are explored concurrently when > 1; the first success in tree
        order is returned either way.
    stats : BranchStats, optional
        Filled with node count, depth and fan-out.

    Returns
    -------
    Schedule or None
        A valid schedule of total length ≤ λ (trailing waits trimmed), or None.
    """
    if lam is None:
        if inst.objective is None or inst.objective.kind != ObjectiveKind.LENGTH:
            raise ValueError("solve_length_fpt needs a length bound, got none")
        lam = inst.objective.bound
    stats = stats if stats is not None else BranchStats()

    movers = sum(1 for r in inst.robots if r.start != r.target)
    if movers > lam or sum(manhattan(r.start, r.target) for r in inst.robots) > lam:
        logger.info("solve_length_fpt: dist_min exceeds lambda=%d", lam)
        return None

    brancher = _Brancher(inst, lam)
    root = _Node()

    if threads <= 1:
        found = brancher.search(root, stats)
    else:
        stats.nodes += 1
        idx = brancher.next_robot(root)
        if idx is None:
            found = root
        else:
            kids = brancher.children(root, idx)
            stats.max_fanout = max(stats.max_fanout, len(kids))
            sub_stats = [BranchStats() for _ in kids]
            with ThreadPoolExecutor(max_workers=threads) as pool:
                futures = [pool.submit(brancher.search, kid, st) for kid, st in zip(kids, sub_stats)]
                results = [f.result() for f in futures]
            for st in sub_stats:
                stats.merge(st)
            found = next((r for r in results if r is not None), None)

    logger.info(
        "solve_length_fpt: lambda=%d nodes=%d depth=%d fanout=%d solved=%s",
        lam, stats.nodes, stats.max_depth, stats.max_fanout, found is not None,
    )
    if found is None:
        return None
    return _to_schedule(inst, found)
