"""
tests/test_grid.py
Tests for the grid model: routes, slack, conflicts and schedule validation.
"""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from core.exceptions import BadInterval, HorizonMismatch, OutOfBounds
from core.grid import (
    GridDims,
    Point,
    Route,
    Schedule,
    SwapConflict,
    VertexConflict,
    dist_min,
    expand_route,
    makespan_bound,
    route_from_points,
    routes_conflict,
    slack,
    traveled_length,
    validate_schedule,
)
from tests.conftest import make_instance, make_schedule


# ---------------------------------------------------------------------------
# Routes
# ---------------------------------------------------------------------------

class TestRoutes:
    def test_expand_route_positions(self):
        """Position j is the start displaced by the first j moves."""
        pts = expand_route(Route(Point(0, 0), "RUW"))
        assert pts == [Point(0, 0), Point(1, 0), Point(1, 1), Point(1, 1)]

    def test_expand_route_out_of_bounds(self):
        """Leaving the grid raises OutOfBounds carrying the step."""
        with pytest.raises(OutOfBounds) as exc:
            expand_route(Route(Point(0, 0), "RRR"), GridDims(2, 2))
        assert exc.value.step == 2

    def test_expand_route_negative_quadrant(self):
        """Without dims only negative coordinates are rejected."""
        with pytest.raises(OutOfBounds):
            expand_route(Route(Point(0, 0), "L"))

    @pytest.mark.parametrize("dims", [None, GridDims(3, 3)])
    def test_out_of_bounds_reports_position_index(self, dims):
        """The reported step is the index of the first position off the grid."""
        with pytest.raises(OutOfBounds) as exc:
            expand_route(Route(Point(0, 0), "LW"), dims)
        assert exc.value.step == 1
        assert exc.value.point == (-1, 0)

    def test_route_from_points_inverts_expansion(self):
        """Rebuilding a route from its points gives back its moves."""
        r = Route(Point(2, 2), "ULWDR")
        assert route_from_points(r.positions()) == r

    def test_route_from_points_rejects_jumps(self):
        """Non-adjacent consecutive points are rejected."""
        with pytest.raises(ValueError):
            route_from_points([Point(0, 0), Point(2, 0)])

    def test_bad_move_letter(self):
        """Moves outside UDLRW are rejected."""
        with pytest.raises(ValueError):
            Route(Point(0, 0), "RX")

    def test_trimmed_and_padded(self):
        """Padding adds waits; trimming drops trailing waits."""
        r = Route(Point(0, 0), "R").padded(3)
        assert r.moves == "RWW"
        assert r.trimmed().moves == "R"
        with pytest.raises(HorizonMismatch):
            r.padded(1)


# ---------------------------------------------------------------------------
# Slack and lengths
# ---------------------------------------------------------------------------

class TestSlack:
    def test_straight_route_has_zero_slack(self):
        """A shortest route has no slack."""
        assert slack(Route(Point(0, 0), "RRU"), 0, 3) == 0

    def test_wait_and_detour_count(self):
        """Each wait and each detour pair add slack."""
        assert slack(Route(Point(0, 0), "RWL"), 0, 3) == 3
        assert slack(Route(Point(0, 0), "UDR"), 0, 3) == 2

    def test_sub_interval(self):
        """Slack is measured on the window only."""
        r = Route(Point(0, 0), "WWRR")
        assert slack(r, 2, 4) == 0
        assert slack(r, 0, 2) == 2

    def test_bad_interval(self):
        """Intervals must lie inside [0, horizon]."""
        with pytest.raises(BadInterval):
            slack(Route(Point(0, 0), "R"), 0, 2)

    def test_dist_min_and_length(self, pair_instance):
        """dist_min sums Manhattan distances; traveled length skips waits."""
        assert dist_min(pair_instance) == 4
        s = make_schedule(pair_instance, ["RWR", "LL"])
        assert traveled_length(s) == 4


# ---------------------------------------------------------------------------
# Conflicts and validation
# ---------------------------------------------------------------------------

class TestConflicts:
    def test_vertex_conflict(self):
        """Two robots entering the same cell collide."""
        rep = routes_conflict(Route(Point(0, 0), "R"), Route(Point(2, 0), "L"))
        assert rep == VertexConflict(1, Point(1, 0))

    def test_swap_conflict(self):
        """Exchanging positions along an edge is a conflict."""
        rep = routes_conflict(Route(Point(0, 0), "R"), Route(Point(1, 0), "L"))
        assert isinstance(rep, SwapConflict)
        assert rep.time == 0

    def test_following_is_allowed(self):
        """A robot may enter the cell another one leaves in the same step."""
        assert routes_conflict(Route(Point(0, 0), "RR"), Route(Point(1, 0), "RR")) is None

    def test_horizon_mismatch(self):
        """Routes of different horizons cannot be compared."""
        with pytest.raises(HorizonMismatch):
            routes_conflict(Route(Point(0, 0), "R"), Route(Point(3, 3), ""))


class TestValidateSchedule:
    def test_valid_schedule(self, pair_instance):
        """Opposite rows never meet."""
        report = validate_schedule(pair_instance, make_schedule(pair_instance, ["RR", "LL"]))
        assert report.valid
        assert report.violations() == {}

    def test_endpoint_violation(self, pair_instance):
        """Stopping short of the target is reported."""
        report = validate_schedule(pair_instance, make_schedule(pair_instance, ["R", "LL"]))
        assert "endpoints" in report.violations()

    def test_bounds_violation(self, pair_instance):
        """Leaving the grid is reported."""
        report = validate_schedule(pair_instance, make_schedule(pair_instance, ["DURR", "LL"]))
        assert "bounds" in report.violations()

    def test_objective_violation(self, pair_instance):
        """A horizon over the makespan bound is reported."""
        s = make_schedule(pair_instance, ["WWWRR", "LL"])
        assert "objective" in validate_schedule(pair_instance, s).violations()

    def test_swap_instance_conflict(self, swap_instance):
        """Swapping on a 2x1 grid always conflicts."""
        report = validate_schedule(swap_instance, make_schedule(swap_instance, ["R", "L"]))
        assert report.conflict is not None

    def test_duplicate_starts_rejected(self):
        """Instances need distinct starts and distinct targets."""
        with pytest.raises(ValueError):
            make_instance(3, 3, [((0, 0), (1, 1)), ((0, 0), (2, 2))])


# ---------------------------------------------------------------------------
# Agreement with a brute-force pairwise scan
# ---------------------------------------------------------------------------

def _brute_conflict(paths: list[list[Point]]) -> bool:
    for a in range(len(paths)):
        for b in range(a + 1, len(paths)):
            for t in range(len(paths[a])):
                if paths[a][t] == paths[b][t]:
                    return True
                if t + 1 < len(paths[a]) and paths[a][t] == paths[b][t + 1] and paths[b][t] == paths[a][t + 1] \
                        and paths[a][t] != paths[a][t + 1]:
                    return True
    return False


@st.composite
def instance_and_schedule(draw):
    w = draw(st.integers(1, 6))
    h = draw(st.integers(1, 6))
    k = draw(st.integers(1, min(4, w * h)))
    horizon = draw(st.integers(0, 8))
    cells = [(x, y) for x in range(w) for y in range(h)]
    starts = draw(st.permutations(cells).map(lambda c: c[:k]))
    moves = [draw(st.text(alphabet="UDLRW", min_size=horizon, max_size=horizon)) for _ in range(k)]
    inst = make_instance(w, h, [(s, s) for s in starts])
    sched = Schedule(horizon, tuple(Route(Point(*s), m) for s, m in zip(starts, moves)))
    return inst, sched


class TestValidationOracle:
    @settings(max_examples=1000, deadline=None)
    @given(instance_and_schedule())
    def test_conflict_agrees_with_brute_force(self, data):
        """validate_schedule's conflict verdict matches a direct pairwise scan."""
        inst, sched = data
        report = validate_schedule(inst, sched)
        expected = _brute_conflict([r.positions() for r in sched.routes])
        assert (report.conflict is not None) == expected

    @settings(max_examples=200, deadline=None)
    @given(instance_and_schedule())
    def test_bounds_agree_with_brute_force(self, data):
        """A bounds violation is reported iff some position leaves the grid."""
        inst, sched = data
        outside = any(not inst.dims.contains(p) for r in sched.routes for p in r.positions())
        assert (validate_schedule(inst, sched).bounds is not None) == outside


def test_makespan_bound_rejects_negative():
    """Objective bounds are non-negative."""
    with pytest.raises(ValueError):
        makespan_bound(-1)
