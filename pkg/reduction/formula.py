"""
reduction/formula.py
Formulas (DIMACS CNF) and plane orthogonal drawings of their incidence graphs.

Variables are named "x1".."xn" and clauses "C1".."Cm" in drawings. Headings are
numbered counter-clockwise from east: 0 = east, 1 = north, 2 = west, 3 = south.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Iterator, Optional

from core.grid import Point

logger = logging.getLogger(__name__)

MAX_OCCURRENCES = 4


# ---------------------------------------------------------------------------
# Formula
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Formula:
    num_vars: int
    clauses: tuple[tuple[int, int, int], ...]   # DIMACS literals, ±(1..num_vars)

    def __post_init__(self):
        object.__setattr__(self, "clauses", tuple(tuple(c) for c in self.clauses))
        if self.num_vars < 1:
            raise ValueError(f"formula needs at least one variable, got {self.num_vars}")
        counts = [0] * (self.num_vars + 1)
        for idx, clause in enumerate(self.clauses, start=1):
            if len(clause) != 3 or len({abs(lit) for lit in clause}) != 3:
                raise ValueError(f"clause {idx} must hold 3 literals over distinct variables, got {clause}")
            for lit in clause:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise ValueError(f"clause {idx} has literal {lit} outside 1..{self.num_vars}")
                counts[abs(lit)] += 1
        for var in range(1, self.num_vars + 1):
            if counts[var] > MAX_OCCURRENCES:
                raise ValueError(f"variable {var} occurs in {counts[var]} clauses, at most {MAX_OCCURRENCES} allowed")

    def occurrences(self, var: int) -> list[tuple[int, int]]:
        """(clause index, literal) pairs mentioning var, clause indices 1-based."""
        return [(idx, lit) for idx, clause in enumerate(self.clauses, start=1) for lit in clause if abs(lit) == var]

    def is_satisfied(self, assignment: dict[int, bool]) -> bool:
        return all(any(assignment[abs(lit)] == (lit > 0) for lit in clause) for clause in self.clauses)

    def satisfying_assignments(self) -> Iterator[dict[int, bool]]:
        """Brute force over all 2^n assignments. Small formulas only."""
        for values in itertools.product((False, True), repeat=self.num_vars):
            assignment = dict(enumerate(values, start=1))
            if self.is_satisfied(assignment):
                yield assignment

    def to_dimacs(self) -> str:
        lines = [f"p cnf {self.num_vars} {len(self.clauses)}"]
        lines += [" ".join(str(lit) for lit in clause) + " 0" for clause in self.clauses]
        return "\n".join(lines) + "\n"


def parse_dimacs(text: str) -> Formula:
    """
    Parse DIMACS CNF. Comment lines start with "c"; clauses may span lines and end in 0.

    Raises
    ------
    ValueError
        Missing or malformed header, a dangling clause, or a clause count mismatch.
    """
    header: Optional[tuple[int, int]] = None
    clauses: list[tuple[int, ...]] = []
    current: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ValueError(f"line {lineno}: bad problem line {line!r}")
            header = (int(parts[2]), int(parts[3]))
            continue
        if header is None:
            raise ValueError(f"line {lineno}: clause before the 'p cnf' header")
        for token in line.split():
            lit = int(token)
            if lit == 0:
                clauses.append(tuple(current))
                current = []
            else:
                current.append(lit)
    if header is None:
        raise ValueError("no 'p cnf' header")
    if current:
        raise ValueError(f"last clause {current} is not terminated by 0")
    if len(clauses) != header[1]:
        raise ValueError(f"header declares {header[1]} clauses, got {len(clauses)}")
    return Formula(header[0], tuple(clauses))


# ---------------------------------------------------------------------------
# Drawing
# ---------------------------------------------------------------------------

def heading(p: Point, q: Point) -> int:
    """Heading of the axis-parallel segment p -> q."""
    dx, dy = q.x - p.x, q.y - p.y
    if (dx == 0) == (dy == 0):
        raise ValueError(f"segment {p}->{q} is not axis-parallel")
    if dx:
        return 0 if dx > 0 else 2
    return 1 if dy > 0 else 3


def variable_name(var: int) -> str:
    return f"x{var}"


def clause_name(idx: int) -> str:
    return f"C{idx}"


@dataclass(frozen=True)
class DrawnEdge:
    u: str
    v: str
    bends: tuple[Point, ...] = ()


@dataclass(frozen=True)
class Drawing:
    cell: int
    vertices: dict[str, Point]
    edges: tuple[DrawnEdge, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(self.edges))
        if self.cell < 1:
            raise ValueError(f"cell size must be positive, got {self.cell}")
        for e in self.edges:
            for name in (e.u, e.v):
                if name not in self.vertices:
                    raise ValueError(f"edge {e.u}-{e.v} names unknown vertex {name}")
            pts = self._polyline(e)
            for p, q in zip(pts, pts[1:]):
                heading(p, q)

    def _polyline(self, e: DrawnEdge) -> list[Point]:
        return [self.vertices[e.u], *e.bends, self.vertices[e.v]]

    def edge_between(self, var: int, clause: int) -> DrawnEdge:
        a, b = variable_name(var), clause_name(clause)
        for e in self.edges:
            if {e.u, e.v} == {a, b}:
                return e
        raise ValueError(f"drawing has no edge {a}-{b}")

    def polyline(self, var: int, clause: int) -> list[Point]:
        """Corner points from the variable vertex to the clause vertex."""
        e = self.edge_between(var, clause)
        pts = self._polyline(e)
        return pts if e.u == variable_name(var) else pts[::-1]

    def check_plane(self) -> None:
        """
        Raises ValueError when two edges meet anywhere but a shared endpoint, or two
        edges leave a vertex on the same side.
        """
        owner: dict[Point, int] = {}
        endpoints = set(self.vertices.values())
        for idx, e in enumerate(self.edges):
            for p in _raster(self._polyline(e)):
                if p in endpoints:
                    continue
                if p in owner and owner[p] != idx:
                    other = self.edges[owner[p]]
                    raise ValueError(f"edges {e.u}-{e.v} and {other.u}-{other.v} meet at {p.as_list()}")
                owner[p] = idx
        sides: dict[tuple[str, int], DrawnEdge] = {}
        for e in self.edges:
            pts = self._polyline(e)
            for name, a, b in ((e.u, pts[0], pts[1]), (e.v, pts[-1], pts[-2])):
                key = (name, heading(a, b))
                if key in sides:
                    raise ValueError(f"vertex {name} has two edges leaving on side {key[1]}")
                sides[key] = e

    def check_against(self, f: Formula) -> None:
        """Raises ValueError unless the edges are exactly the variable-clause incidences of f."""
        expected = {
            frozenset((variable_name(abs(lit)), clause_name(idx)))
            for idx, clause in enumerate(f.clauses, start=1) for lit in clause
        }
        drawn = [frozenset((e.u, e.v)) for e in self.edges]
        if len(set(drawn)) != len(drawn):
            raise ValueError("drawing repeats an edge")
        if set(drawn) != expected:
            missing = sorted(tuple(sorted(x)) for x in expected - set(drawn))
            extra = sorted(tuple(sorted(x)) for x in set(drawn) - expected)
            raise ValueError(f"drawing does not match the formula: missing {missing}, extra {extra}")
        for var in range(1, f.num_vars + 1):
            if variable_name(var) not in self.vertices:
                raise ValueError(f"drawing has no vertex for {variable_name(var)}")


def _raster(pts: list[Point]) -> Iterator[Point]:
    for p, q in zip(pts, pts[1:]):
        dx = (q.x > p.x) - (q.x < p.x)
        dy = (q.y > p.y) - (q.y < p.y)
        cur = p
        while cur != q:
            yield cur
            cur = cur.offset(dx, dy)
    yield pts[-1]


def refine_drawing(dr: Drawing, factor: int) -> Drawing:
    """Replace every cell by a factor×factor block: all coordinates scale by factor."""
    if factor < 1:
        raise ValueError(f"refinement factor must be at least 1, got {factor}")

    def scale(p: Point) -> Point:
        return Point(p.x * factor, p.y * factor)

    return Drawing(
        cell=dr.cell * factor,
        vertices={name: scale(p) for name, p in dr.vertices.items()},
        edges=tuple(DrawnEdge(e.u, e.v, tuple(scale(b) for b in e.bends)) for e in dr.edges),
    )
