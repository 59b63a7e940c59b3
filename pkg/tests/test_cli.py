"""
tests/test_cli.py
End-to-end tests for the cmpkit command line: exit codes, outputs and error handling.
"""

import json

import pytest

from app.main import main
from core.constants import EXIT_OK, EXIT_RESOURCE_LIMIT, EXIT_UNSOLVABLE, EXIT_USAGE
from core.grid import GridDims, Point, traveled_length, validate_schedule
from core.schemas import PathInstanceModel, ReductionModel, ScenarioModel, SolutionModel
from paths.disjoint import PathInstance
from reduction.cmpm import stream_routes


@pytest.fixture
def pair(fixtures_dir):
    return str(fixtures_dir / "pair_3x3.json")


@pytest.fixture
def swap(fixtures_dir):
    return str(fixtures_dir / "swap_2x1.json")


@pytest.fixture
def pair_solution(fixtures_dir):
    return str(fixtures_dir / "pair_3x3_solution.json")


def _write(path, model) -> str:
    path.write_text(model.model_dump_json(), encoding="utf-8")
    return str(path)


class TestValidate:
    def test_valid(self, pair, pair_solution, capsys):
        assert main(["validate", pair, pair_solution]) == EXIT_OK
        assert "valid" in capsys.readouterr().out

    def test_invalid_json_report(self, swap, tmp_path, capsys):
        bad = _write(tmp_path / "bad.json", SolutionModel(horizon=1, moves=["R", "L"]))
        assert main(["--json", "validate", swap, bad]) == EXIT_UNSOLVABLE
        payload = json.loads(capsys.readouterr().out)
        assert payload["valid"] is False
        assert "conflict" in payload["violations"]

    def test_missing_file(self, pair, tmp_path, capsys):
        assert main(["validate", pair, str(tmp_path / "nope.json")]) == EXIT_USAGE
        assert "cmpkit:" in capsys.readouterr().err

    def test_malformed_json(self, pair, tmp_path, capsys):
        broken = tmp_path / "broken.json"
        broken.write_text('{"horizon": "x"}', encoding="utf-8")
        assert main(["--json", "validate", pair, str(broken)]) == EXIT_USAGE
        err = json.loads(capsys.readouterr().err)
        assert err["exit_code"] == EXIT_USAGE
        assert err["error"] == "ValidationError"


class TestSolve:
    def test_solves_and_writes(self, pair, tmp_path):
        out = tmp_path / "sol.json"
        assert main(["solve", pair, "-o", str(out)]) == EXIT_OK
        inst = ScenarioModel.model_validate_json(open(pair).read()).to_domain()
        schedule = SolutionModel.model_validate_json(out.read_text()).to_domain(inst)
        assert validate_schedule(inst, schedule).valid
        assert schedule.horizon == 2

    def test_unsolvable(self, swap):
        assert main(["solve", swap]) == EXIT_UNSOLVABLE

    def test_budget(self, pair):
        assert main(["solve", pair, "--budget", "1"]) == EXIT_RESOURCE_LIMIT

    def test_length_fpt(self, tmp_path, capsys):
        inst = ScenarioModel(
            width=3, height=2, objective={"kind": "length", "bound": 8},
            robots=[{"id": 0, "start": (0, 0), "target": (2, 0)}, {"id": 1, "start": (2, 0), "target": (0, 0)}],
        )
        path = _write(tmp_path / "corridor.json", inst)
        assert main(["solve-length-fpt", path, "--lambda", "5"]) == EXIT_UNSOLVABLE
        capsys.readouterr()
        assert main(["solve-length-fpt", path]) == EXIT_OK
        out = json.loads(capsys.readouterr().out)
        assert 6 <= out["bound_report"]["total_length"] <= 8

    @pytest.mark.parametrize("threads", ["1", "3"])
    def test_threads_give_the_optimal_length(self, tmp_path, threads):
        """Length objectives solve to the same optimum single- or multi-threaded."""
        inst = ScenarioModel(
            width=3, height=2, objective={"kind": "length", "bound": 8},
            robots=[{"id": 0, "start": (0, 0), "target": (2, 0)}, {"id": 1, "start": (2, 0), "target": (0, 0)}],
        )
        path = _write(tmp_path / "corridor.json", inst)
        out = tmp_path / "sol.json"
        assert main(["solve", path, "--threads", threads, "-o", str(out)]) == EXIT_OK
        domain = inst.to_domain()
        schedule = SolutionModel.model_validate_json(out.read_text()).to_domain(domain)
        assert validate_schedule(domain, schedule).valid
        assert traveled_length(schedule) == 6

    def test_threads_on_makespan(self, pair):
        assert main(["solve", pair, "--threads", "2"]) == EXIT_OK

    def test_construct_delegates_small_grid(self, pair, capsys):
        assert main(["construct", pair]) == EXIT_OK
        out = json.loads(capsys.readouterr().out)
        assert out["bound_report"]["delegated"] is True


class TestGenAndRender:
    def test_gen_is_seeded(self, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        for out in (a, b):
            assert main(["gen", "--width", "8", "--height", "8", "-k", "3", "--seed", "7", "-o", str(out)]) == EXIT_OK
        assert a.read_text() == b.read_text()
        inst = ScenarioModel.model_validate_json(a.read_text()).to_domain()
        assert inst.k == 3

    def test_gen_objective(self, tmp_path):
        out = tmp_path / "g.json"
        assert main(["gen", "--width", "5", "--height", "5", "-k", "2", "--objective", "length:9", "-o", str(out)]) == EXIT_OK
        assert json.loads(out.read_text())["objective"] == {"kind": "length", "bound": 9}

    def test_gen_too_many_robots(self):
        assert main(["gen", "--width", "2", "--height", "2", "-k", "5"]) == EXIT_USAGE

    def test_render(self, pair, pair_solution, tmp_path):
        out = tmp_path / "pair.svg"
        assert main(["render", pair, pair_solution, "-o", str(out)]) == EXIT_OK
        assert out.read_text().lstrip().startswith("<?xml")


class TestAnalyzeAndSnapshot:
    def test_analyze(self, pair, pair_solution, capsys):
        assert main(["--json", "analyze", pair, pair_solution, "--interval", "0", "2"]) == EXIT_OK
        report = json.loads(capsys.readouterr().out)
        assert report["valid"] is True
        assert len(report["robots"]) == 2

    def test_snapshot_round_trip(self, pair, pair_solution, tmp_path):
        snap, rebuilt = tmp_path / "snap.json", tmp_path / "rebuilt.json"
        assert main(["snapshot", "extract", pair, pair_solution, "-o", str(snap)]) == EXIT_OK
        assert main(["snapshot", "reconstruct", pair, str(snap), "-o", str(rebuilt)]) == EXIT_OK
        assert json.loads(rebuilt.read_text())["moves"] == ["RR", "LL"]


class TestDpaths:
    def test_solve(self, tmp_path):
        inst = PathInstance(GridDims(3, 3), ((Point(0, 0), Point(2, 2)),), 4)
        path = _write(tmp_path / "paths.json", PathInstanceModel.from_domain(inst))
        assert main(["dpaths", "solve", path]) == EXIT_OK

    def test_unsolvable(self, tmp_path):
        requests = ((Point(0, 1), Point(2, 1)), (Point(1, 0), Point(1, 2)))
        path = _write(tmp_path / "cross.json", PathInstanceModel.from_domain(PathInstance(GridDims(3, 3), requests, 4)))
        assert main(["dpaths", "solve", path]) == EXIT_UNSOLVABLE


class TestReduce:
    @pytest.fixture
    def inputs(self, fixtures_dir):
        return [
            "--formula", str(fixtures_dir / "one_clause_mixed.cnf"),
            "--drawing", str(fixtures_dir / "one_clause.json"),
            "--factor", "20",
        ]

    @pytest.mark.parametrize("target", ["vdp", "cmpm"])
    def test_verify(self, inputs, target, tmp_path):
        out = tmp_path / f"{target}.json"
        assert main(["reduce", "--target", target, *inputs, "--verify", "-o", str(out)]) == EXIT_OK
        model = ReductionModel.model_validate_json(out.read_text())
        assert model.checks and all(c.ok for c in model.checks)

    def test_force(self, inputs, tmp_path):
        out = tmp_path / "forced.json"
        assert main(["reduce", "--target", "vdp", *inputs, "--force", "x1=0", "x2=1", "-o", str(out)]) == EXIT_OK
        assert ReductionModel.model_validate_json(out.read_text()).path_instance is not None

    def test_force_cmpm(self, inputs, tmp_path):
        """Forcing every variable fixes the three connection robots next to the streams."""
        out = tmp_path / "cmpm.json"
        assert main(["reduce", "--target", "cmpm", *inputs, "--force", "x1=1", "x2=0", "x3=1", "-o", str(out)]) == EXIT_OK
        model = ReductionModel.model_validate_json(out.read_text())
        assert len(model.forced_routes) == len(stream_routes()) + 3

    def test_bad_force(self, inputs):
        assert main(["reduce", "--target", "vdp", *inputs, "--force", "y1=0"]) == EXIT_USAGE

    def test_coarse_factor(self, fixtures_dir):
        """A refinement below 20 cannot fit the gadgets."""
        args = [
            "reduce", "--target", "vdp",
            "--formula", str(fixtures_dir / "one_clause_mixed.cnf"),
            "--drawing", str(fixtures_dir / "one_clause.json"),
            "--factor", "10",
        ]
        assert main(args) == EXIT_USAGE


def test_unknown_command():
    assert main(["frobnicate"]) == EXIT_USAGE


def test_version(capsys):
    assert main(["--version"]) == EXIT_OK
