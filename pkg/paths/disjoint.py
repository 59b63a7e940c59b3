"""
paths/disjoint.py
Bounded-length vertex- and edge-disjoint paths on grid graphs.

Paths are simple. A request (v, v) is a blocker: in vertex mode it is satisfied by the
zero-length path and occupies v; the edge variant replaces it by requests towards the
four neighbors (see blocker_expansion_edp).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator, Optional

import networkx as nx

from core.config import get_settings
from core.exceptions import BoundaryBlocker, ResourceLimit
from core.grid import GridDims, Point

logger = logging.getLogger(__name__)

GridPath = tuple[Point, ...]
Edge = tuple[Point, Point]   # smaller point first


class PathMode(str, Enum):
    VERTEX = "vertex"
    EDGE = "edge"


@dataclass(frozen=True)
class PathInstance:
    dims: GridDims
    requests: tuple[tuple[Point, Point], ...]
    d: int
    mode: PathMode = PathMode.VERTEX

    def __post_init__(self):
        object.__setattr__(self, "requests", tuple(self.requests))
        object.__setattr__(self, "mode", PathMode(self.mode))
        if self.d < 0:
            raise ValueError(f"path length bound must be non-negative, got {self.d}")
        for s, t in self.requests:
            if not self.dims.contains(s) or not self.dims.contains(t):
                raise ValueError(f"request {s}->{t} lies outside {self.dims.width}x{self.dims.height}")

    @property
    def blockers(self) -> list[Point]:
        return [s for s, t in self.requests if s == t]


def edge_of(p: Point, q: Point) -> Edge:
    return (p, q) if p <= q else (q, p)


def path_edges(path: GridPath) -> list[Edge]:
    return [edge_of(p, q) for p, q in zip(path, path[1:])]


# ---------------------------------------------------------------------------
# Graph and path enumeration
# ---------------------------------------------------------------------------

def grid_graph(
    dims: GridDims,
    blocked_vertices: Iterable[Point] = (),
    blocked_edges: Iterable[Edge] = (),
) -> nx.Graph:
    """The width×height grid graph on Point nodes, minus the blocked parts."""
    g = nx.relabel_nodes(nx.grid_2d_graph(dims.width, dims.height), lambda n: Point(*n))
    g.remove_nodes_from([p for p in blocked_vertices if p in g])
    g.remove_edges_from([e for e in blocked_edges if g.has_edge(*e)])
    return g


def enumerate_paths(
    inst: PathInstance,
    s: Point,
    t: Point,
    blocked_vertices: Iterable[Point] = (),
    blocked_edges: Iterable[Edge] = (),
) -> list[GridPath]:
    """All simple s-t paths of length ≤ d avoiding the blocked sets, in lexicographic vertex order."""
    blocked_vertices = set(blocked_vertices)
    if s in blocked_vertices or t in blocked_vertices:
        return []
    if s == t:
        return [(s,)]
    return paths_in(grid_graph(inst.dims, blocked_vertices, blocked_edges), s, t, inst.d)


def paths_in(g: nx.Graph, s: Point, t: Point, d: int) -> list[GridPath]:
    """Simple s-t paths of length ≤ d in g, in lexicographic vertex order."""
    if s not in g or t not in g:
        return []
    if s == t:
        return [(s,)]
    to_target = nx.single_source_shortest_path_length(g, t, cutoff=d)
    if s not in to_target:
        return []

    out: list[GridPath] = []
    path = [s]
    on_path = {s}

    def dfs(v: Point) -> None:
        if v == t:
            out.append(tuple(path))
            return
        for u in sorted(g.neighbors(v)):
            if u in on_path or u not in to_target:
                continue
            if len(path) + to_target[u] > d:
                continue
            path.append(u)
            on_path.add(u)
            dfs(u)
            on_path.discard(u)
            path.pop()

    dfs(s)
    return out


# ---------------------------------------------------------------------------
# Independent checker
# ---------------------------------------------------------------------------

def check_disjoint(inst: PathInstance, paths: list[GridPath]) -> Optional[str]:
    """First problem with a proposed solution, or None when it is valid."""
    if len(paths) != len(inst.requests):
        return f"expected {len(inst.requests)} paths, got {len(paths)}"
    seen_vertices: dict[Point, int] = {}
    seen_edges: dict[Edge, int] = {}
    for idx, ((s, t), path) in enumerate(zip(inst.requests, paths)):
        if not path or path[0] != s or path[-1] != t:
            return f"path {idx} does not connect {s} to {t}"
        if len(path) - 1 > inst.d:
            return f"path {idx} has length {len(path) - 1} > {inst.d}"
        if len(set(path)) != len(path):
            return f"path {idx} is not simple"
        for p, q in zip(path, path[1:]):
            if abs(p.x - q.x) + abs(p.y - q.y) != 1:
                return f"path {idx} jumps from {p} to {q}"
        if not all(inst.dims.contains(p) for p in path):
            return f"path {idx} leaves the grid"
        if inst.mode == PathMode.VERTEX:
            for p in path:
                if p in seen_vertices:
                    return f"paths {seen_vertices[p]} and {idx} share vertex {p}"
                seen_vertices[p] = idx
        else:
            for e in path_edges(path):
                if e in seen_edges:
                    return f"paths {seen_edges[e]} and {idx} share edge {e}"
                seen_edges[e] = idx
    return None


# ---------------------------------------------------------------------------
# Backtracking
# ---------------------------------------------------------------------------

class _Search:
    """Most-constrained-first backtracking over precomputed candidate paths."""

    def __init__(self, inst: PathInstance, budget: int):
        self.inst = inst
        self.budget = budget
        self.nodes = 0
        self.fixed: dict[int, GridPath] = {}
        self.candidates: dict[int, list[GridPath]] = {}

    def prepare(self) -> bool:
        """Fix forced paths and enumerate the rest; False when trivially infeasible."""
        inst = self.inst
        if inst.mode == PathMode.VERTEX:
            blockers = [i for i, (s, t) in enumerate(inst.requests) if s == t]
            cells = [inst.requests[i][0] for i in blockers]
            if len(set(cells)) != len(cells):
                return False
            for i in blockers:
                self.fixed[i] = (inst.requests[i][0],)
            g = grid_graph(inst.dims, blocked_vertices=set(cells))
            for i, (s, t) in enumerate(inst.requests):
                if i not in self.fixed:
                    self.candidates[i] = paths_in(g, s, t, inst.d)
        else:
            for i in _saturated_requests(inst):
                s, t = inst.requests[i]
                self.fixed[i] = (s, t)
            static_edges = {e for p in self.fixed.values() for e in path_edges(p)}
            g = grid_graph(inst.dims, blocked_edges=static_edges)
            for i, (s, t) in enumerate(inst.requests):
                if i not in self.fixed:
                    self.candidates[i] = paths_in(g, s, t, inst.d)
        return all(self.candidates.values())

    def _fits(self, path: GridPath, used_v: set[Point], used_e: set[Edge]) -> bool:
        if self.inst.mode == PathMode.VERTEX:
            return not any(p in used_v for p in path)
        return not any(e in used_e for e in path_edges(path))

    def solutions(self) -> Iterator[dict[int, GridPath]]:
        used_v = {p for path in self.fixed.values() for p in path}
        used_e = {e for path in self.fixed.values() for e in path_edges(path)}
        assigned = dict(self.fixed)

        def options(i: int) -> list[GridPath]:
            return [p for p in self.candidates[i] if self._fits(p, used_v, used_e)]

        def recurse() -> Iterator[dict[int, GridPath]]:
            self.nodes += 1
            if self.nodes > self.budget:
                raise ResourceLimit(self.nodes - 1, "solve_disjoint")
            open_requests = [i for i in self.candidates if i not in assigned]
            if not open_requests:
                yield dict(assigned)
                return
            table = {i: options(i) for i in open_requests}
            if any(not opts for opts in table.values()):
                return
            pick = min(open_requests, key=lambda i: (len(table[i]), i))
            for path in table[pick]:
                new_e = path_edges(path)
                assigned[pick] = path
                used_v.update(path)
                used_e.update(new_e)
                yield from recurse()
                used_v.difference_update(path)
                used_e.difference_update(new_e)
                del assigned[pick]

        yield from recurse()


def _saturated_requests(inst: PathInstance) -> list[int]:
    """
    Requests (v, u) to an adjacent u issued from a vertex v whose every grid edge is
    requested by v towards a distinct neighbor. Those requests take their direct edge.
    """
    outgoing: dict[Point, dict[Point, int]] = {}
    for i, (s, t) in enumerate(inst.requests):
        if abs(s.x - t.x) + abs(s.y - t.y) == 1:
            outgoing.setdefault(s, {}).setdefault(t, i)
            outgoing.setdefault(t, {}).setdefault(s, i)
    out = set()
    for v, towards in outgoing.items():
        degree = sum(1 for u in v.neighbors() if inst.dims.contains(u))
        if len(towards) == degree:
            out.update(towards.values())
    return sorted(out)


def iter_disjoint_solutions(inst: PathInstance, budget: Optional[int] = None) -> Iterator[list[GridPath]]:
    """Every solution in search order; raises ResourceLimit when the node budget runs out."""
    budget = get_settings().DPATHS_NODE_BUDGET if budget is None else budget
    search = _Search(inst, budget)
    if not search.prepare():
        return
    for found in search.solutions():
        yield [found[i] for i in range(len(inst.requests))]


def solve_disjoint(inst: PathInstance, budget: Optional[int] = None) -> Optional[list[GridPath]]:
    """
    One set of pairwise disjoint bounded paths, or None when none exists.

    Raises
    ------
    ResourceLimit
        The node budget (DPATHS_NODE_BUDGET by default) ran out first.
    """
    found = next(iter_disjoint_solutions(inst, budget), None)
    logger.info(
        "solve_disjoint: %d request(s), mode=%s, d=%d, solved=%s",
        len(inst.requests), inst.mode.value, inst.d, found is not None,
    )
    return found


def count_disjoint_solutions(inst: PathInstance, budget: Optional[int] = None) -> int:
    return sum(1 for _ in iter_disjoint_solutions(inst, budget))


# ---------------------------------------------------------------------------
# Edge variant
# ---------------------------------------------------------------------------

def blocker_expansion_edp(inst: PathInstance) -> PathInstance:
    """
    Edge-disjoint instance: each blocker (v, v) becomes requests from v to its four
    neighbors. (v, u) and (u, v) count as the same request and are emitted once.

    Raises
    ------
    BoundaryBlocker
        A blocker sits on the grid boundary.
    """
    requests: list[tuple[Point, Point]] = [(s, t) for s, t in inst.requests if s != t]
    seen = {frozenset((s, t)) for s, t in requests}
    for v in dict.fromkeys(inst.blockers):
        for u in v.neighbors():
            if not inst.dims.contains(u):
                raise BoundaryBlocker(f"blocker at {v.as_list()} has no neighbor at {u.as_list()}")
            key = frozenset((v, u))
            if key in seen:
                continue
            seen.add(key)
            requests.append((v, u))
    return PathInstance(inst.dims, tuple(requests), inst.d, PathMode.EDGE)
