"""
tests/test_exact.py
Tests for the exact makespan and total-length solvers and the turn oracle.
"""

import pytest

from core.exceptions import ResourceLimit
from core.grid import ObjectiveKind, traveled_length, validate_schedule
from solvers.exact import min_turns_at_optimum, solve_makespan, solve_total_length
from tests.conftest import make_instance


class TestSolveMakespan:
    def test_swap_is_unsolvable(self, swap_instance):
        """Two robots cannot exchange places on a 2x1 grid."""
        assert solve_makespan(swap_instance) is None

    def test_swap_is_unsolvable_without_bound(self, swap_instance):
        """Exhausting the configuration space also proves unsolvability."""
        assert solve_makespan(swap_instance.with_objective(None)) is None

    def test_pair_is_optimal(self, pair_instance):
        s = solve_makespan(pair_instance)
        assert s.horizon == 2
        assert validate_schedule(pair_instance, s).valid

    def test_corridor_needs_a_detour(self, corridor_instance):
        """One robot steps onto the second row, so the optimum is 4."""
        s = solve_makespan(corridor_instance)
        assert s.horizon == 4
        assert solve_makespan(corridor_instance, bound=3) is None

    def test_single_robot(self):
        inst = make_instance(3, 3, [((0, 0), (2, 1))])
        assert solve_makespan(inst).horizon == 3
        assert solve_makespan(inst, bound=2) is None

    def test_budget_exhausted(self, corridor_instance):
        with pytest.raises(ResourceLimit):
            solve_makespan(corridor_instance, budget=1)

    def test_ties_take_the_smallest_move_tuple(self):
        """Among optimal schedules the first joint move is smallest in U<D<L<R<W, robot by robot."""
        inst = make_instance(3, 3, [((0, 0), (1, 1)), ((2, 2), (2, 2))])
        s = solve_makespan(inst)
        assert [r.moves for r in s.routes] == ["UR", "DU"]

    def test_deterministic(self, corridor_instance):
        first = solve_makespan(corridor_instance)
        assert solve_makespan(corridor_instance) == first


class TestSolveTotalLength:
    def test_corridor_optimum(self, corridor_instance):
        """The straight robot moves 2, the detouring one 4."""
        s = solve_total_length(corridor_instance)
        assert traveled_length(s) == 6
        assert validate_schedule(corridor_instance, s).valid

    def test_bound_below_optimum(self, corridor_instance):
        assert solve_total_length(corridor_instance, bound=5) is None

    def test_swap_is_unsolvable(self, swap_instance):
        assert solve_total_length(swap_instance.with_objective(None)) is None

    def test_horizon_never_exceeds_length(self, corridor_instance):
        """The all-wait step is never generated."""
        s = solve_total_length(corridor_instance)
        assert s.horizon <= traveled_length(s)

    def test_horizon_cap(self, corridor_instance):
        """A horizon limits time steps: four suffice for the detour, three do not."""
        s = solve_total_length(corridor_instance, horizon=4)
        assert s.horizon <= 4
        assert traveled_length(s) == 6
        assert solve_total_length(corridor_instance, horizon=3) is None


class TestTurnOracle:
    def test_straight_rows(self, pair_instance):
        assert min_turns_at_optimum(pair_instance) == 0

    def test_detour_turns(self, corridor_instance):
        """Leaving and rejoining the row costs two turns."""
        assert min_turns_at_optimum(corridor_instance, ObjectiveKind.LENGTH) == 2

    def test_unsolvable(self, swap_instance):
        assert min_turns_at_optimum(swap_instance) is None
