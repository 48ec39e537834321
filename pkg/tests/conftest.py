"""Shared fixtures: small analytic problems and an isolated run history."""

from typing import Callable, Optional, Sequence

import numpy as np
import pytest

from gsdo.config import SolverConfig, get_settings
from gsdo.models import ConstraintKind, ConstraintOutcome, EvaluationOutcome
from gsdo.services import history as history_module
from gsdo.services.problem import ConstraintDef, ProblemSpec


def make_problem(
    objective: Callable,
    constraints: Sequence[Callable] = (),
    kinds: Optional[Sequence[ConstraintKind]] = None,
    lower: Sequence[float] = (0.0, 0.0),
    upper: Sequence[float] = (1.0, 1.0),
    name: str = "toy",
    known_optimum: Optional[float] = None,
) -> ProblemSpec:
    kinds = list(kinds) if kinds is not None else [ConstraintKind.QRSK] * len(constraints)
    return ProblemSpec(
        name=name,
        lower=tuple(float(v) for v in lower),
        upper=tuple(float(v) for v in upper),
        objective=objective,
        constraints=tuple(
            ConstraintDef(kind=k, evaluator=g, name=f"g{j + 1}")
            for j, (k, g) in enumerate(zip(kinds, constraints))
        ),
        known_optimum=known_optimum,
    )


def outcome(values, kinds, objective: Optional[float] = 0.0, hidden: bool = False) -> EvaluationOutcome:
    """Hand-built outcome; quantifiable kinds carry values, the rest pass/fail flags."""
    constraints = []
    for v, k in zip(values, kinds):
        if k.quantifiable:
            constraints.append(ConstraintOutcome(kind=k, value=v, satisfied=v >= 0))
        else:
            constraints.append(ConstraintOutcome(kind=k, satisfied=v >= 0))
    return EvaluationOutcome(objective=objective, constraints=constraints, hidden_failure=hidden)


@pytest.fixture(autouse=True)
def isolated_history(tmp_path, monkeypatch):
    """Every test gets its own history file."""
    monkeypatch.setenv("GSDO_HISTORY_PATH", str(tmp_path / "runs.json"))
    monkeypatch.setenv("GSDO_WORKERS", "1")
    get_settings.cache_clear()
    history_module._run_history = None
    yield tmp_path / "runs.json"
    get_settings.cache_clear()
    history_module._run_history = None


@pytest.fixture
def fast_config() -> SolverConfig:
    """Small DE budgets keep solver tests quick."""
    return SolverConfig(de_budget_per_dim=300, p4_starts=2)


@pytest.fixture
def feasible_problem() -> ProblemSpec:
    """Everything in the box is feasible."""
    return make_problem(
        lambda x: float((x[0] - 0.3) ** 2 + (x[1] - 0.7) ** 2),
        [lambda x: 1.0],
        name="everywhere-feasible",
    )


@pytest.fixture
def infeasible_problem() -> ProblemSpec:
    return make_problem(lambda x: float(np.sum(x)), [lambda x: -1.0], name="nowhere-feasible")


@pytest.fixture
def sphere_problem() -> ProblemSpec:
    """min ||x - (0.8, 0.8)||^2 s.t. x1 + x2 <= 1; optimum 0.18 at (0.5, 0.5)."""
    return make_problem(
        lambda x: float((x[0] - 0.8) ** 2 + (x[1] - 0.8) ** 2),
        [lambda x: float(1.0 - x[0] - x[1])],
        name="sphere",
        known_optimum=0.18,
    )


@pytest.fixture
def nusk_problem() -> ProblemSpec:
    """First constraint only reports pass/fail and withholds the objective on failure."""
    return make_problem(
        lambda x: float(x[0] + x[1]),
        [lambda x: float(x[0] - 0.3), lambda x: float(x[0] + x[1] - 0.5)],
        kinds=[ConstraintKind.NUSK, ConstraintKind.QRSK],
        name="nusk",
    )
