"""
core/schemas.py
Pydantic models for every cmpkit JSON file: scenarios, solutions, snapshots,
path instances, drawings and reports.
"""

from typing import Literal, Optional

from pydantic import BaseModel, Field

from core.grid import GridDims, Instance, Objective, ObjectiveKind, Point, Robot, Route, Schedule
from paths.disjoint import GridPath, PathInstance, PathMode
from reduction.formula import Drawing, DrawnEdge
from snapshot.extract import Snapshot, Witness
from solvers.construct import CertifiedBound


class ObjectiveModel(BaseModel):
    kind: Literal["makespan", "length"]
    bound: int = Field(ge=0)


class RobotModel(BaseModel):
    id: int
    start: tuple[int, int]
    target: tuple[int, int]


class ScenarioModel(BaseModel):
    width: int = Field(ge=1)
    height: int = Field(ge=1)
    objective: Optional[ObjectiveModel] = None
    robots: list[RobotModel]

    def to_domain(self) -> Instance:
        robots = tuple(
            Robot(r.id, Point(*r.start), Point(*r.target))
            for r in sorted(self.robots, key=lambda r: r.id)
        )
        objective = None
        if self.objective is not None:
            objective = Objective(ObjectiveKind(self.objective.kind), self.objective.bound)
        return Instance(GridDims(self.width, self.height), robots, objective)

    @classmethod
    def from_domain(cls, inst: Instance) -> "ScenarioModel":
        objective = None
        if inst.objective is not None:
            objective = ObjectiveModel(kind=inst.objective.kind.value, bound=inst.objective.bound)
        return cls(
            width=inst.dims.width,
            height=inst.dims.height,
            objective=objective,
            robots=[
                RobotModel(id=r.id, start=(r.start.x, r.start.y), target=(r.target.x, r.target.y))
                for r in inst.robots
            ],
        )


class SolutionModel(BaseModel):
    horizon: int = Field(ge=0)
    moves: list[str]

    def to_domain(self, inst: Instance) -> Schedule:
        """Attach the move strings to the scenario's starts (robot order matches)."""
        if len(self.moves) != inst.k:
            raise ValueError(f"solution has {len(self.moves)} routes, scenario has {inst.k} robots")
        return Schedule(self.horizon, tuple(Route(s, m) for s, m in zip(inst.starts, self.moves)))

    @classmethod
    def from_domain(cls, s: Schedule) -> "SolutionModel":
        return cls(horizon=s.horizon, moves=[r.moves for r in s.routes])


class BoundReport(BaseModel):
    """Extra block emitted by solve-length-fpt and construct."""
    dist_min: int
    total_length: int
    overhead: int
    turns: list[int]
    certified_length_bound: Optional[int] = None
    certified_turn_bound: Optional[int] = None
    delegated: bool = False

    @classmethod
    def from_certified(cls, cert: "CertifiedBound") -> "BoundReport":
        return cls(
            dist_min=cert.dist_min,
            total_length=cert.total_length,
            overhead=cert.overhead,
            turns=list(cert.turns),
            certified_length_bound=cert.length_bound,
            certified_turn_bound=cert.turn_bound,
        )


class BoundedSolutionModel(SolutionModel):
    bound_report: BoundReport


# ---------------------------------------------------------------------------
# Analysis report
# ---------------------------------------------------------------------------

class RobotMetrics(BaseModel):
    id: int
    length: int
    slack: int
    wait_slack: int
    travel_slack: int
    turns: int
    monotone_runs: int


class GoodIntervalModel(BaseModel):
    interval: tuple[int, int]
    small: list[int]
    large: list[int]


class AnalyzeReport(BaseModel):
    valid: bool
    violations: dict[str, str] = Field(default_factory=dict)
    horizon: int
    dist_min: int
    total_length: int
    interval: tuple[int, int]
    robots: list[RobotMetrics]
    good_intervals: list[GoodIntervalModel] = Field(default_factory=list)


# ---------------------------------------------------------------------------
# Snapshot
# ---------------------------------------------------------------------------

class VisitsModel(BaseModel):
    v: tuple[int, int]
    visits: list[int]


class WaitModel(BaseModel):
    v: tuple[int, int]
    q: int = Field(ge=0)
    steps: int = Field(ge=0)


class WitnessModel(BaseModel):
    w_down: list[int]
    w_right: list[int]
    waits: list[WaitModel] = Field(default_factory=list)


class SnapshotModel(BaseModel):
    dims: tuple[int, int]
    pairs: list[tuple[tuple[int, int], tuple[int, int]]]
    routes: list[str]
    iota: list[VisitsModel] = Field(default_factory=list)
    witness: WitnessModel

    def to_domain(self) -> tuple[Snapshot, Witness]:
        snap = Snapshot(
            GridDims(*self.dims),
            tuple((Point(*s), Point(*t)) for s, t in self.pairs),
            tuple(self.routes),
            {Point(*e.v): list(e.visits) for e in self.iota},
        )
        w = Witness(
            list(self.witness.w_down),
            list(self.witness.w_right),
            {(Point(*e.v), e.q): e.steps for e in self.witness.waits},
        )
        return snap, w

    @classmethod
    def from_domain(cls, snap: Snapshot, w: Witness) -> "SnapshotModel":
        return cls(
            dims=(snap.dims_snap.width, snap.dims_snap.height),
            pairs=[((s.x, s.y), (t.x, t.y)) for s, t in snap.pairs],
            routes=list(snap.routes_snap),
            iota=[VisitsModel(v=(v.x, v.y), visits=ids) for v, ids in sorted(snap.iota.items())],
            witness=WitnessModel(
                w_down=w.w_down,
                w_right=w.w_right,
                waits=[
                    WaitModel(v=(v.x, v.y), q=q, steps=steps)
                    for (v, q), steps in sorted(w.waits.items()) if steps
                ],
            ),
        )


# ---------------------------------------------------------------------------
# Disjoint paths
# ---------------------------------------------------------------------------

class PathInstanceModel(BaseModel):
    width: int = Field(ge=1)
    height: int = Field(ge=1)
    d: int = Field(ge=0)
    mode: Literal["vertex", "edge"] = "vertex"
    requests: list[tuple[tuple[int, int], tuple[int, int]]]

    def to_domain(self) -> PathInstance:
        return PathInstance(
            GridDims(self.width, self.height),
            tuple((Point(*s), Point(*t)) for s, t in self.requests),
            self.d,
            PathMode(self.mode),
        )

    @classmethod
    def from_domain(cls, inst: PathInstance) -> "PathInstanceModel":
        return cls(
            width=inst.dims.width,
            height=inst.dims.height,
            d=inst.d,
            mode=inst.mode.value,
            requests=[((s.x, s.y), (t.x, t.y)) for s, t in inst.requests],
        )


class PathSolutionModel(BaseModel):
    paths: list[list[tuple[int, int]]]

    def to_domain(self) -> list[GridPath]:
        return [tuple(Point(*p) for p in path) for path in self.paths]

    @classmethod
    def from_domain(cls, paths: list[GridPath]) -> "PathSolutionModel":
        return cls(paths=[[(p.x, p.y) for p in path] for path in paths])


# ---------------------------------------------------------------------------
# Drawing
# ---------------------------------------------------------------------------

class DrawnEdgeModel(BaseModel):
    u: str
    v: str
    bends: list[tuple[int, int]] = Field(default_factory=list)


class DrawingModel(BaseModel):
    cell: int = Field(ge=1)
    vertices: dict[str, tuple[int, int]]
    edges: list[DrawnEdgeModel]

    def to_domain(self) -> Drawing:
        return Drawing(
            cell=self.cell,
            vertices={name: Point(*p) for name, p in self.vertices.items()},
            edges=tuple(DrawnEdge(e.u, e.v, tuple(Point(*b) for b in e.bends)) for e in self.edges),
        )

    @classmethod
    def from_domain(cls, dr: Drawing) -> "DrawingModel":
        return cls(
            cell=dr.cell,
            vertices={name: (p.x, p.y) for name, p in dr.vertices.items()},
            edges=[DrawnEdgeModel(u=e.u, v=e.v, bends=[(b.x, b.y) for b in e.bends]) for e in dr.edges],
        )


# ---------------------------------------------------------------------------
# Reduction output
# ---------------------------------------------------------------------------

class GadgetCheck(BaseModel):
    name: str
    ok: bool
    detail: dict = Field(default_factory=dict)


class ReductionModel(BaseModel):
    """Output of `cmpkit reduce`: exactly one of path_instance / scenario is set."""
    target: Literal["vdp", "edp", "cmpm"]
    factor: int
    path_instance: Optional[PathInstanceModel] = None
    scenario: Optional[ScenarioModel] = None
    forced_routes: dict[int, str] = Field(default_factory=dict)   # robot id -> fixed moves (streams, forced connections)
    checks: list[GadgetCheck] = Field(default_factory=list)
