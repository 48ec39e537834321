"""Pydantic models for solver records, benchmark results and the HTTP API."""

from datetime import datetime
from enum import Enum
from pathlib import Path
from typing import Dict, List, Optional, Union

import pandas as pd
from pydantic import BaseModel, Field, field_validator, model_validator

from gsdo import __version__


# ==================== Enums ====================

class ConstraintKind(str, Enum):
    """Constraint taxonomy: Quantifiable/Nonquantifiable, Relaxable/Unrelaxable,
    Simulation-based, Known/Hidden."""
    QRSK = "QRSK"
    NRSK = "NRSK"
    QUSK = "QUSK"
    NUSK = "NUSK"
    NUSH = "NUSH"

    @property
    def quantifiable(self) -> bool:
        return self in (ConstraintKind.QRSK, ConstraintKind.QUSK)

    @property
    def relaxable(self) -> bool:
        return self in (ConstraintKind.QRSK, ConstraintKind.NRSK)


class PointClass(str, Enum):
    """Archive partition an evaluated point belongs to."""
    F = "F"  # feasible
    I = "I"  # violates QRSK only  # noqa: E741
    S = "S"  # violates an NRSK
    U = "U"  # violates exactly one QUSK
    H = "H"  # hidden failure, NUSK, or several QUSK


class Scenario(str, Enum):
    """Constraint relabeling scenarios applied to the test bed."""
    SET1 = "Set1"
    SET2 = "Set2"
    SET3 = "Set3"
    SET4 = "Set4"

    @classmethod
    def parse(cls, value) -> "Scenario":
        """Accept 1, "1", "set1" or "Set1"."""
        if isinstance(value, Scenario):
            return value
        text = str(value).strip().lower().removeprefix("set")
        for member in cls:
            if member.value.lower() == f"set{text}":
                return member
        raise ValueError(f"Unknown scenario: {value!r} (expected 1-4)")

    @property
    def number(self) -> int:
        return int(self.value[-1])


class TerminationReason(str, Enum):
    """Why a run stopped."""
    BUDGET_EXHAUSTED = "BudgetExhausted"
    DELTA_BELOW_MIN = "DeltaBelowMin"
    NO_FEASIBLE_FOUND = "NoFeasibleFound"


class Stage(str, Enum):
    """Solver stage that produced an evaluation."""
    FIND_FEASIBLE = "stage1"
    SPREAD = "stage2"
    GLOBAL = "stage3"


class PointSource(str, Enum):
    """How an evaluated point was generated."""
    LHS = "lhs"
    P2 = "p2"
    P3 = "p3"
    P4 = "p4"
    P5 = "p5"
    BALL = "ball"


class ProfileKind(str, Enum):
    """Benchmark profile types."""
    DATA = "data"
    PERF = "perf"


# ==================== Evaluation Models ====================

class ConstraintOutcome(BaseModel):
    """What one constraint evaluator revealed at a point.

    Quantifiable kinds carry ``value``; nonquantifiable kinds carry only
    ``satisfied``. Both are None when the simulation crashed.
    """
    kind: ConstraintKind
    value: Optional[float] = None
    satisfied: Optional[bool] = None


class EvaluationOutcome(BaseModel):
    """Result of one expensive evaluation."""
    objective: Optional[float] = Field(
        default=None, description="Objective value, None when unavailable"
    )
    constraints: List[ConstraintOutcome] = Field(default_factory=list)
    hidden_failure: bool = False


class EvaluatedPoint(BaseModel):
    """An archived evaluation with its classification."""
    index: int
    x: List[float]
    point_class: PointClass
    objective: Optional[float] = None
    constraints: List[ConstraintOutcome] = Field(default_factory=list)
    hidden_failure: bool = False
    violated_qusk: Optional[int] = Field(
        default=None, description="Index of the single violated QUSK constraint (U points)"
    )


class GcParams(BaseModel):
    """Scores returned by the classification constraint."""
    c1: float = 1.0
    c2: float = -1.0
    c3: float = -10.0
    c4: float = -100.0
    k_neighbors: int = 3

    @model_validator(mode="after")
    def check_ordering(self):
        if not self.c1 > 0:
            raise ValueError("c1 must be positive")
        if not self.c4 < self.c3 < self.c2 < 0:
            raise ValueError("scores must satisfy c4 < c3 < c2 < 0")
        if self.k_neighbors < 1 or self.k_neighbors % 2 == 0:
            raise ValueError("k_neighbors must be a positive odd integer")
        return self


# ==================== Trial Models ====================

class LogEntry(BaseModel):
    """One row of the per-evaluation log."""
    index: int
    x: List[float]
    point_class: PointClass
    objective: Optional[float] = None
    best_feasible: Optional[float] = None
    stage: Stage
    source: PointSource


class SurrogateFit(BaseModel):
    """Center set used by one surrogate fit."""
    evaluations: int
    target: str
    centers: List[int]


class TrialSummary(BaseModel):
    """Summary line of a run."""
    problem: str
    scenario: Scenario
    seed: int
    budget: int
    best_f: Optional[float] = None
    best_x: Optional[List[float]] = None
    feasible: bool
    evaluations: int
    termination: TerminationReason
    counts: Dict[str, int] = Field(default_factory=dict)
    stage_boundaries: Dict[str, int] = Field(default_factory=dict)


class TrialRecord(BaseModel):
    """Full record of a single solver run."""
    problem: str
    scenario: Scenario
    seed: int
    budget: int
    log: List[LogEntry] = Field(default_factory=list)
    termination: Optional[TerminationReason] = None
    stage_boundaries: Dict[str, int] = Field(
        default_factory=dict, description="Stage name -> index of its first evaluation"
    )
    surrogate_fits: List[SurrogateFit] = Field(default_factory=list)

    def trajectory(self) -> List[Optional[float]]:
        """Best feasible objective after each evaluation."""
        return [entry.best_feasible for entry in self.log]

    def summary(self) -> TrialSummary:
        best_f, best_x = None, None
        for entry in self.log:
            if entry.point_class == PointClass.F and (
                best_f is None or entry.objective < best_f
            ):
                best_f, best_x = entry.objective, entry.x
        counts = {cls.value: 0 for cls in PointClass}
        for entry in self.log:
            counts[entry.point_class.value] += 1
        return TrialSummary(
            problem=self.problem,
            scenario=self.scenario,
            seed=self.seed,
            budget=self.budget,
            best_f=best_f,
            best_x=best_x,
            feasible=best_f is not None,
            evaluations=len(self.log),
            termination=self.termination or TerminationReason.BUDGET_EXHAUSTED,
            counts=counts,
            stage_boundaries=dict(self.stage_boundaries),
        )

    def to_frame(self) -> pd.DataFrame:
        """One row per evaluation: index, coordinates, class, objective, best so far."""
        rows = []
        for entry in self.log:
            row = {"index": entry.index}
            row.update({f"x{i + 1}": v for i, v in enumerate(entry.x)})
            row.update(
                {
                    "class": entry.point_class.value,
                    "objective": entry.objective,
                    "best_feasible": entry.best_feasible,
                    "stage": entry.stage.value,
                    "source": entry.source.value,
                }
            )
            rows.append(row)
        return pd.DataFrame(rows)

    def to_csv(self, path: Union[str, Path]):
        self.to_frame().to_csv(path, index=False, na_rep="NA")


# ==================== Benchmark Models ====================

class BenchTrial(BaseModel):
    """One (label, problem, scenario, seed) row of an experiment."""
    label: str = "gsdo"
    problem: str
    scenario: Scenario
    seed: int
    n_dim: int
    budget: int
    f_star: Optional[float] = None
    ns_flag: bool
    best_f: Optional[float] = None
    evals_used: int
    termination: TerminationReason
    rel_error: Optional[float] = None
    trajectory: List[Optional[float]] = Field(default_factory=list)


class ProblemAggregate(BaseModel):
    """Per-problem aggregate over trials (successful trials only for medians)."""
    label: str
    problem: str
    scenario: Scenario
    trials: int
    n_s: int
    median_f: Optional[float] = None
    min_f: Optional[float] = None
    max_f: Optional[float] = None
    median_rel_error: Optional[float] = None


class ExperimentResult(BaseModel):
    """Trials plus their aggregates."""
    trials: List[BenchTrial] = Field(default_factory=list)
    aggregates: List[ProblemAggregate] = Field(default_factory=list)


class ProfileTable(BaseModel):
    """Data or performance profile curves on a common grid."""
    kind: ProfileKind
    tau: float
    grid: List[float]
    curves: Dict[str, List[float]] = Field(default_factory=dict)

    @field_validator("tau")
    @classmethod
    def validate_tau(cls, v):
        if not 0 < v < 1:
            raise ValueError("tau must lie in (0, 1)")
        return v


# ==================== History Models ====================

class RunRecord(BaseModel):
    """Persisted summary of a past run."""
    id: str
    timestamp: datetime
    problem: str
    scenario: Scenario
    seed: int
    budget: int
    best_f: Optional[float] = None
    feasible: bool
    evaluations: int
    termination: TerminationReason


class HistoryResponse(BaseModel):
    """Run history response."""
    runs: List[RunRecord]
    total: int
    max_entries: int


# ==================== API Models ====================

class HealthResponse(BaseModel):
    """Health check response."""
    status: str = "healthy"
    problems_registered: int
    timestamp: datetime
    server_version: str = __version__


class ProblemInfo(BaseModel):
    """Registry metadata for one problem."""
    name: str
    dimension: int
    constraints: int
    kinds: List[ConstraintKind]
    known_optimum: Optional[float] = None
    source: str = ""


class ProblemListResponse(BaseModel):
    """Problems available under a scenario."""
    scenario: Scenario
    problems: List[ProblemInfo]
    total: int


class SolveRequest(BaseModel):
    """Request body for a single solver run."""
    problem: str = Field(..., description="Registered problem name, e.g. G24")
    scenario: Scenario = Field(default=Scenario.SET1)
    budget: Optional[int] = Field(default=None, ge=1, description="Defaults to the scenario budget")
    seed: int = Field(default=0, ge=0)
    config: Dict[str, float] = Field(
        default_factory=dict, description="SolverConfig overrides (flat keys)"
    )
    include_log: bool = False

    @field_validator("scenario", mode="before")
    @classmethod
    def parse_scenario(cls, v):
        return Scenario.parse(v)


class SolveResponse(BaseModel):
    """Response for a single solver run."""
    run_id: Optional[str] = None
    summary: TrialSummary
    log: Optional[List[LogEntry]] = None
