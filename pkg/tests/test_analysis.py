"""
tests/test_analysis.py
Tests for turns, monotone runs, slack partitions, good intervals and flattening.
"""

import pytest

from analysis.flatten import flatten_cell, minimize_turns
from analysis.slack import (
    AllSmall,
    Gap,
    NoGap,
    SlackPartition,
    check_good_interval,
    good_intervals,
    h_iterates,
    slack_partition,
    wait_travel_slack,
)
from analysis.turns import (
    Rect,
    TurnKind,
    is_monotone,
    monotone_runs,
    run_rectangle,
    tau_bound,
    total_turns,
    turn_count,
    turns,
)
from core.exceptions import BadInterval, NonMonotoneH, NotACell
from core.grid import GridDims, Point, Route, Schedule, traveled_length


def _double(x: int) -> int:
    return 2 * x


# ---------------------------------------------------------------------------
# Turns
# ---------------------------------------------------------------------------

class TestTurns:
    def test_corner_turns(self):
        """Each change of direction is a turn at the vertex it starts from."""
        ts = turns(Route(Point(0, 0), "RRUURR"))
        assert [(t.index, t.point) for t in ts] == [(2, Point(2, 0)), (4, Point(2, 2))]
        assert all(t.kind == TurnKind.CORNER for t in ts)

    def test_waits_are_transparent(self):
        """Inserting waits never changes the turn count."""
        assert turn_count(Route(Point(0, 0), "RU")) == turn_count(Route(Point(0, 0), "RWWU")) == 1
        assert turn_count(Route(Point(0, 0), "RWR")) == 0

    def test_uturn(self):
        """Reversing direction is a U-turn."""
        (t,) = turns(Route(Point(0, 0), "RL"))
        assert t.kind == TurnKind.UTURN

    def test_window(self):
        """Only turns inside the window are counted."""
        r = Route(Point(0, 0), "RURURU")
        assert turn_count(r) == 5
        assert turn_count(r, 0, 2) == 1
        with pytest.raises(BadInterval):
            turns(r, 3, 9)

    def test_total_turns(self):
        """Schedule turns add up over robots."""
        s = Schedule(3, (Route(Point(0, 0), "RUR"), Route(Point(5, 5), "WWW")))
        assert total_turns(s) == 2


class TestMonotoneRuns:
    def test_staircase_is_one_run(self):
        """An alternating staircase forms a single monotone run."""
        r = Route(Point(0, 0), "RURURU")
        runs = monotone_runs(r)
        assert len(runs) == 1
        assert runs[0].directions == (("R", "U"), ("U", "R"))
        assert is_monotone(turns(r))

    def test_direction_change_splits_runs(self):
        """A turn breaking the alternation starts a new run."""
        runs = monotone_runs(Route(Point(0, 0), "RURD"))
        assert [(m.first, m.last) for m in runs] == [(0, 1), (2, 2)]

    def test_uturns_stand_alone(self):
        """Every U-turn is its own run."""
        runs = monotone_runs(Route(Point(0, 0), "RLR"))
        assert [(m.first, m.last) for m in runs] == [(0, 0), (1, 1)]

    def test_run_rectangle(self):
        """The rectangle spans the first and last turn vertices of the run."""
        r = Route(Point(0, 0), "RURURU")
        assert run_rectangle(r, monotone_runs(r)[0]) == Rect(Point(1, 0), Point(3, 2))


class TestTauBound:
    @pytest.mark.parametrize("k, sigma, expected", [
        (1, None, 19),
        (2, 0, 12),
        (2, None, 220),
    ])
    def test_values(self, k, sigma, expected):
        """3·k^k·(σ+1) + σ with σ defaulting to 4k²."""
        assert tau_bound(k, sigma) == expected

    def test_rejects_zero_robots(self):
        with pytest.raises(ValueError):
            tau_bound(0)


# ---------------------------------------------------------------------------
# Slack
# ---------------------------------------------------------------------------

class TestWaitTravelSlack:
    def test_split(self):
        """Waits and detours add up to the slack."""
        assert wait_travel_slack(Route(Point(0, 0), "RWUD")) == (1, 2)

    def test_window(self):
        assert wait_travel_slack(Route(Point(0, 0), "WWRR"), 2, 4) == (0, 0)


class TestSlackPartition:
    def test_h_iterates(self):
        assert h_iterates(_double, 3) == [6, 12, 24]

    def test_decreasing_h_rejected(self):
        """Iterates must never decrease."""
        with pytest.raises(NonMonotoneH):
            h_iterates(lambda x: 10 - x, 2)

    def test_all_small(self):
        assert slack_partition([1, 2, 3], _double, 3) == AllSmall(24)

    def test_gap_at_first_band(self):
        """Slacks below h(k) and above h²(k) split at j = 2."""
        result = slack_partition([0, 30], _double, 3)
        assert result == Gap(SlackPartition(frozenset({0}), frozenset({1}), 2))

    def test_gap_at_later_band(self):
        """An occupied first band pushes the split to j = 3."""
        result = slack_partition([0, 10, 30], _double, 3)
        assert isinstance(result, Gap)
        assert result.partition.threshold == 3
        assert result.partition.small == frozenset({0, 1})

    def test_no_gap(self):
        """Every band occupied means no partition."""
        assert slack_partition([7, 13, 30], _double, 3) == NoGap((6, 12, 24))


class TestGoodIntervals:
    @pytest.fixture
    def looping(self) -> Schedule:
        """One robot circling a cell twice: 7 turns, slack 8 over the whole horizon."""
        return Schedule(8, (Route(Point(0, 0), "URDLURDL"),))

    def test_finds_the_full_window(self, looping):
        """Only the full window reaches slack γ = 8."""
        found = good_intervals(looping, sigma=0, gamma=8, d=1)
        assert found == [((0, 8), SlackPartition(frozenset(), frozenset({0})))]

    def test_check_agrees(self, looping):
        """The independent evaluator accepts what the search found and rejects a bad split."""
        good = SlackPartition(frozenset(), frozenset({0}))
        bad = SlackPartition(frozenset({0}), frozenset())
        assert check_good_interval(looping, 0, 8, good, 0, 8, 1)
        assert not check_good_interval(looping, 0, 8, bad, 0, 8, 1)

    def test_too_few_turns(self):
        """Slack alone is not enough: a large robot must also turn often."""
        s = Schedule(8, (Route(Point(0, 0), "WWWWWWWW"),))
        assert good_intervals(s, sigma=0, gamma=8, d=1) == []

    def test_sigma_below_gamma(self, looping):
        with pytest.raises(ValueError):
            good_intervals(looping, sigma=8, gamma=8, d=1)

    def test_check_rejects_bad_interval(self, looping):
        with pytest.raises(BadInterval):
            check_good_interval(looping, 4, 4, SlackPartition(frozenset(), frozenset({0})), 0, 8, 1)


# ---------------------------------------------------------------------------
# Flattening
# ---------------------------------------------------------------------------

class TestFlatten:
    def test_mirrors_elbow(self):
        """The elbow goes through the opposite corner."""
        s = Schedule(2, (Route(Point(0, 0), "RU"),))
        assert flatten_cell(s, 0, 0).routes[0].moves == "UR"

    def test_waits_keep_their_slots(self):
        s = Schedule(3, (Route(Point(0, 0), "RWU"),))
        assert flatten_cell(s, 0, 0).routes[0].moves == "UWR"

    def test_conflict_returns_none(self):
        """A mirrored elbow running into another robot is refused."""
        s = Schedule(2, (Route(Point(0, 0), "RU"), Route(Point(0, 1), "WW")))
        assert flatten_cell(s, 0, 0) is None

    def test_mirror_stays_in_the_grid(self):
        """The mirrored elbow uses the opposite corner of the same box."""
        s = Schedule(2, (Route(Point(0, 1), "RD"),))
        out = flatten_cell(s, 0, 0)
        assert out.routes[0].moves == "DR"
        assert all(GridDims(2, 2).contains(p) for p in out.routes[0].positions())

    def test_uturn_is_not_a_cell(self):
        s = Schedule(2, (Route(Point(1, 1), "RL"),))
        with pytest.raises(NotACell):
            flatten_cell(s, 0, 0)
        with pytest.raises(NotACell):
            flatten_cell(s, 0, 3)

    def test_minimize_turns(self):
        """A staircase collapses to a single turn; endpoints and length are kept."""
        s = Schedule(4, (Route(Point(0, 0), "RURU"),))
        out = minimize_turns(s)
        assert total_turns(out) == 1
        assert out.routes[0].end == Point(2, 2)
        assert traveled_length(out) == traveled_length(s)
