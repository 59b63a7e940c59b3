"""
tests/test_reduction.py
Tests for formulas and drawings, the disjoint-paths gadgets, layout and compilation.
"""

import itertools

import pytest

from core.config import Settings
from core.constants import VDP_PATH_BOUND
from core.exceptions import ClearanceViolation
from core.grid import Point
from paths.disjoint import PathMode, check_disjoint, solve_disjoint
from reduction.compile import compile_edp, compile_vdp
from reduction.formula import Drawing, DrawnEdge, Formula, parse_dimacs, refine_drawing
from reduction.gadgets import (
    STANDARD_SHAPE,
    ClauseFamily,
    Placement,
    PlacedGadget,
    VariableShape,
    verify_clause_paths,
    verify_variable_gadget,
)
from reduction.layout import Clearance, build_layout, cycle_outline, loop_placements

FACTOR: int = Settings.model_fields["TEST_REFINEMENT_FACTOR"].default   # expected coordinates assume the default


# ---------------------------------------------------------------------------
# Formulas and drawings
# ---------------------------------------------------------------------------

class TestFormula:
    def test_parse(self, mixed_clause):
        assert mixed_clause.num_vars == 3
        assert mixed_clause.clauses == ((1, -2, -3),)

    def test_satisfying_assignments(self, mixed_clause):
        """Only x1=F, x2=T, x3=T falsifies the clause."""
        assignments = list(mixed_clause.satisfying_assignments())
        assert len(assignments) == 7
        assert {1: False, 2: True, 3: True} not in assignments

    def test_too_many_occurrences(self):
        """Each variable may occur in at most four clauses."""
        clauses = tuple((1, 2, 3) for _ in range(5))
        with pytest.raises(ValueError):
            Formula(3, clauses)

    @pytest.mark.parametrize("text", [
        "1 2 3 0\n",                     # no header
        "p cnf 3 1\n1 2 3\n",            # unterminated
        "p cnf 3 2\n1 2 3 0\n",          # clause count
        "p cnf 3 1\n1 1 2 0\n",          # repeated variable
    ])
    def test_bad_dimacs(self, text):
        with pytest.raises(ValueError):
            parse_dimacs(text)

    def test_drawing_matches_formula(self, one_clause_drawing, mixed_clause):
        one_clause_drawing.check_against(mixed_clause)
        one_clause_drawing.check_plane()

    def test_refine_scales_everything(self, one_clause_drawing):
        fine = refine_drawing(one_clause_drawing, FACTOR)
        assert fine.cell == FACTOR
        assert fine.vertices["C1"] == Point(200, 200)
        assert fine.polyline(1, 1) == [Point(40, 280), Point(40, 200), Point(200, 200)]


# ---------------------------------------------------------------------------
# Gadgets
# ---------------------------------------------------------------------------

class TestVariableGadget:
    @pytest.mark.parametrize("orientation", range(4))
    def test_exactly_two_paths(self, orientation):
        """An isolated gadget has its two arcs and nothing else within the bound."""
        report = verify_variable_gadget(STANDARD_SHAPE.a, STANDARD_SHAPE.b, orientation)
        assert report.lengths == [VDP_PATH_BOUND, VDP_PATH_BOUND]
        assert report.matches_arcs
        assert report.ok

    @pytest.mark.parametrize("orientation", range(4))
    @pytest.mark.parametrize("a", range(4, 26))
    def test_every_shape(self, a, orientation):
        """Every a×b box with a 54-cell ring blocks its interior and leaves exactly the two arcs."""
        b = 29 - a
        report = verify_variable_gadget(a, b, orientation)
        assert report.blocked == (a - 2) * (b - 2)
        assert report.lengths == [VDP_PATH_BOUND, VDP_PATH_BOUND]
        assert report.ok

    def test_arcs_cover_the_ring(self):
        g = PlacedGadget(Placement(Point(0, 0), 0))
        assert set(g.forward) | set(g.backward) == g.ring
        assert set(g.forward) & set(g.backward) == {g.s, g.t}

    def test_shape_validation(self):
        """The ring must have 54 cells."""
        with pytest.raises(ValueError):
            VariableShape.of(10, 10)


class TestClauseGadget:
    def test_families(self):
        report = verify_clause_paths()
        assert report.families[ClauseFamily.LEFT] == [(27, None)]
        assert report.families[ClauseFamily.DOWN] == [(27, 19)]
        assert sorted(report.families[ClauseFamily.UP]) == [(25, 17), (27, 17)]

    def test_closing_all_families_disconnects(self):
        """Any family left open keeps s_C and t_C connected."""
        report = verify_clause_paths()
        assert report.ok
        assert report.solvable_when_closed[frozenset(ClauseFamily)] is False
        assert report.solvable_when_closed[frozenset()] is True


# ---------------------------------------------------------------------------
# Layout
# ---------------------------------------------------------------------------

@pytest.fixture
def mixed_layout(mixed_clause, one_clause_drawing):
    return build_layout(mixed_clause, refine_drawing(one_clause_drawing, FACTOR))


class TestLayout:
    def test_clause_placement(self, mixed_layout):
        assert mixed_layout.clauses[1].s == Point(200, 200)

    def test_loops(self, mixed_layout):
        """Every variable gets a four-gadget loop around its drawing point."""
        for cycle in mixed_layout.cycles.values():
            assert len(cycle.loop) == 4
        assert [g.placement for g in mixed_layout.cycles[1].loop] == loop_placements(Point(37, 263))

    @pytest.mark.parametrize("var, first, last", [
        (1, Placement(Point(27, 263), 3), Placement(Point(180, 188), 0)),
        (2, Placement(Point(336, 311), 3), Placement(Point(222, 202), 2)),
        (3, Placement(Point(130, 336), 0), Placement(Point(194, 218), 3)),
    ])
    def test_chain_ends(self, mixed_layout, var, first, last):
        """Chains leave the loop on the literal's arc and end on the clause tap."""
        chain = mixed_layout.cycles[var].chains[1]
        assert chain[0].placement == first
        assert chain[-1].placement == last

    def test_chain_ends_on_family_tap(self, mixed_layout):
        clause = mixed_layout.clauses[1]
        ends = {cycle.chains[1][-1].placement for cycle in mixed_layout.cycles.values()}
        assert ends == {clause.tap(f) for f in ClauseFamily}

    def test_clearance(self, mixed_clause, one_clause_drawing):
        """A refinement below 20 leaves no room for the gadgets."""
        with pytest.raises(ClearanceViolation):
            build_layout(mixed_clause, refine_drawing(one_clause_drawing, 10))

    def test_clearance_scales_with_the_cell(self, one_clause_drawing):
        assert Clearance.of(refine_drawing(one_clause_drawing, FACTOR)) == Clearance(FACTOR // 4, FACTOR // 2)
        assert Clearance.of(refine_drawing(one_clause_drawing, 1000)) == Clearance(250, 500)

    def test_cycle_outline(self, mixed_layout):
        """Each cycle has sides of at least the follow distance and crosses its edge the cross distance from C1."""
        clause = mixed_layout.clauses[1].s
        for cycle in mixed_layout.cycles.values():
            assert cycle.outline
            for p, q in cycle.outline:
                assert p.x == q.x or p.y == q.y
                assert abs(p.x - q.x) + abs(p.y - q.y) >= FACTOR // 4
            near = min(
                max(0, min(p.x, q.x) - clause.x, clause.x - max(p.x, q.x))
                + max(0, min(p.y, q.y) - clause.y, clause.y - max(p.y, q.y))
                for p, q in cycle.outline
            )
            assert near == FACTOR // 2

    def test_outline_of_an_l(self):
        boxes = [(Point(0, 0), Point(10, 40)), (Point(0, 0), Point(30, 10))]
        sides = {frozenset(s) for s in cycle_outline(boxes)}
        assert sides == {
            frozenset({Point(0, 0), Point(0, 40)}),
            frozenset({Point(0, 40), Point(10, 40)}),
            frozenset({Point(10, 10), Point(10, 40)}),
            frozenset({Point(10, 10), Point(30, 10)}),
            frozenset({Point(30, 0), Point(30, 10)}),
            frozenset({Point(0, 0), Point(30, 0)}),
        }

    def test_cycles_too_close(self, mixed_clause):
        """An edge of x3 running alongside x1's edge leaves no room between their cycles."""
        dr = Drawing(
            cell=FACTOR,
            vertices={"x1": Point(40, 280), "x2": Point(360, 320), "x3": Point(120, 360), "C1": Point(200, 200)},
            edges=(
                DrawnEdge("x1", "C1", (Point(40, 200),)),
                DrawnEdge("x2", "C1", (Point(360, 200),)),
                DrawnEdge("x3", "C1", (Point(48, 360), Point(48, 240), Point(200, 240))),
            ),
        )
        with pytest.raises(ClearanceViolation, match="x1 and x3"):
            build_layout(mixed_clause, dr)


# ---------------------------------------------------------------------------
# Compilation
# ---------------------------------------------------------------------------

class TestCompileVdp:
    def test_satisfiable_clause_is_solvable(self, mixed_clause, one_clause_drawing):
        red = compile_vdp(mixed_clause, one_clause_drawing, FACTOR)
        paths = solve_disjoint(red.instance)
        assert paths is not None
        assert check_disjoint(red.instance, paths) is None
        assert mixed_clause.is_satisfied(red.assignment(paths))

    def test_forced_falsifying_assignment(self, mixed_clause, one_clause_drawing):
        """Fixing the only falsifying assignment closes every tap of the clause."""
        red = compile_vdp(mixed_clause, one_clause_drawing, FACTOR, {1: False, 2: True, 3: True})
        assert solve_disjoint(red.instance) is None

    def test_forced_satisfying_assignment(self, mixed_clause, one_clause_drawing):
        force = {1: True, 2: True, 3: True}
        red = compile_vdp(mixed_clause, one_clause_drawing, FACTOR, force)
        paths = solve_disjoint(red.instance)
        assert red.assignment(paths) == force

    def test_positive_clause(self, positive_clause, one_clause_drawing):
        red = compile_vdp(positive_clause, one_clause_drawing, FACTOR, {1: False, 2: False, 3: False})
        assert solve_disjoint(red.instance) is None

    def test_force_unknown_variable(self, mixed_clause, one_clause_drawing):
        with pytest.raises(ValueError):
            compile_vdp(mixed_clause, one_clause_drawing, FACTOR, {4: True})

    def test_path_bound(self, mixed_clause, one_clause_drawing):
        assert compile_vdp(mixed_clause, one_clause_drawing, FACTOR).instance.d == VDP_PATH_BOUND


class TestCompileEdp:
    def test_agrees_with_vertex_variant(self, mixed_clause, one_clause_drawing):
        """Blocker expansion keeps satisfiability."""
        red = compile_edp(mixed_clause, one_clause_drawing, FACTOR)
        assert red.instance.mode == PathMode.EDGE
        assert not red.instance.blockers
        assert solve_disjoint(red.instance) is not None

    def test_forced_falsifying_assignment(self, mixed_clause, one_clause_drawing):
        red = compile_edp(mixed_clause, one_clause_drawing, FACTOR, {1: False, 2: True, 3: True})
        assert solve_disjoint(red.instance) is None


SIGN_PATTERNS = list(itertools.product((1, -1), repeat=3))


class TestSignPatterns:
    @pytest.mark.parametrize("signs", SIGN_PATTERNS)
    def test_vertex_variant(self, one_clause_drawing, signs):
        """Every polarity of a single clause is solvable, and unsolvable under its falsifying assignment."""
        f = Formula(3, (tuple(s * v for s, v in zip(signs, (1, 2, 3))),))
        red = compile_vdp(f, one_clause_drawing, FACTOR)
        paths = solve_disjoint(red.instance)
        assert paths is not None
        assert f.is_satisfied(red.assignment(paths))
        falsifying = {v: s < 0 for s, v in zip(signs, (1, 2, 3))}
        assert solve_disjoint(compile_vdp(f, one_clause_drawing, FACTOR, falsifying).instance) is None

    @pytest.mark.parametrize("signs", SIGN_PATTERNS)
    def test_edge_variant_agrees(self, one_clause_drawing, signs):
        f = Formula(3, (tuple(s * v for s, v in zip(signs, (1, 2, 3))),))
        assert solve_disjoint(compile_edp(f, one_clause_drawing, FACTOR).instance) is not None
        falsifying = {v: s < 0 for s, v in zip(signs, (1, 2, 3))}
        assert solve_disjoint(compile_edp(f, one_clause_drawing, FACTOR, falsifying).instance) is None
