"""
tests/conftest.py
Shared fixtures for the test suite.
"""

from pathlib import Path

import pytest

from core.grid import GridDims, Instance, Point, Robot, Route, Schedule, length_bound, makespan_bound
from core.schemas import DrawingModel
from reduction.formula import Drawing, Formula, parse_dimacs

FIXTURES = Path(__file__).parent / "fixtures"


def make_instance(width: int, height: int, pairs, objective=None) -> Instance:
    """Instance from ((sx, sy), (tx, ty)) pairs, robot ids in order."""
    robots = tuple(Robot(i, Point(*s), Point(*t)) for i, (s, t) in enumerate(pairs))
    return Instance(GridDims(width, height), robots, objective)


def make_schedule(inst: Instance, moves: list[str]) -> Schedule:
    horizon = max((len(m) for m in moves), default=0)
    return Schedule(horizon, tuple(Route(s, m).padded(horizon) for s, m in zip(inst.starts, moves)))


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def swap_instance() -> Instance:
    """Two robots exchanging places on a 2x1 grid: no schedule exists."""
    return make_instance(2, 1, [((0, 0), (1, 0)), ((1, 0), (0, 0))], makespan_bound(4))


@pytest.fixture
def pair_instance() -> Instance:
    """Two robots crossing a 3x3 grid on opposite rows."""
    return make_instance(3, 3, [((0, 0), (2, 0)), ((2, 2), (0, 2))], makespan_bound(4))


@pytest.fixture
def corridor_instance() -> Instance:
    """Two robots swapping ends of a 3x2 grid; one has to step aside."""
    return make_instance(3, 2, [((0, 0), (2, 0)), ((2, 0), (0, 0))], length_bound(8))


@pytest.fixture
def one_clause_drawing() -> Drawing:
    return DrawingModel.model_validate_json((FIXTURES / "one_clause.json").read_text()).to_domain()


@pytest.fixture
def mixed_clause() -> Formula:
    """(x1 ∨ ¬x2 ∨ ¬x3)"""
    return parse_dimacs((FIXTURES / "one_clause_mixed.cnf").read_text())


@pytest.fixture
def positive_clause() -> Formula:
    return parse_dimacs((FIXTURES / "one_clause_positive.cnf").read_text())
