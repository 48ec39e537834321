"""Problem definitions and the single entry point for expensive evaluations."""

import logging
import math
import shlex
import subprocess
import threading
from functools import cached_property
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from gsdo.exceptions import (
    BudgetExhaustedError,
    ContractError,
    ScenarioError,
    SimulationError,
)
from gsdo.models import (
    ConstraintKind,
    ConstraintOutcome,
    EvaluationOutcome,
    Scenario,
)

logger = logging.getLogger(__name__)

FEASIBILITY_TOL = 1e-6

Evaluator = Callable[[np.ndarray], float]


# ==================== Problem Specs ====================

class ConstraintDef(BaseModel):
    """A constraint evaluator and its taxonomy kind. Feasible when g(x) >= 0."""

    model_config = ConfigDict(frozen=True)

    kind: ConstraintKind = ConstraintKind.QRSK
    evaluator: Evaluator
    name: str = ""


class ProblemSpec(BaseModel):
    """Bound-constrained blackbox problem: minimize f(x) s.t. g_j(x) >= 0, l <= x <= u."""

    model_config = ConfigDict(frozen=True)

    name: str
    lower: Tuple[float, ...]
    upper: Tuple[float, ...]
    objective: Evaluator
    constraints: Tuple[ConstraintDef, ...] = ()
    known_optimum: Optional[float] = None
    best_known_x: Optional[Tuple[float, ...]] = None
    source: str = ""

    @model_validator(mode="after")
    def check_bounds(self):
        if len(self.lower) == 0 or len(self.lower) != len(self.upper):
            raise ValueError("lower and upper must be non-empty and of equal length")
        for lo, up in zip(self.lower, self.upper):
            if not (math.isfinite(lo) and math.isfinite(up)):
                raise ValueError("bounds must be finite")
            if not up > lo:
                raise ValueError("every upper bound must exceed its lower bound")
        if self.best_known_x is not None and len(self.best_known_x) != len(self.lower):
            raise ValueError("best_known_x has the wrong dimension")
        return self

    @property
    def dimension(self) -> int:
        return len(self.lower)

    @property
    def n_constraints(self) -> int:
        return len(self.constraints)

    @property
    def kinds(self) -> List[ConstraintKind]:
        return [c.kind for c in self.constraints]

    @cached_property
    def lower_array(self) -> np.ndarray:
        return np.asarray(self.lower, dtype=float)

    @cached_property
    def upper_array(self) -> np.ndarray:
        return np.asarray(self.upper, dtype=float)

    @cached_property
    def width(self) -> np.ndarray:
        return self.upper_array - self.lower_array

    @property
    def delta_lu(self) -> float:
        """Smallest box side, in raw units."""
        return float(np.min(self.width))

    def normalize(self, x) -> np.ndarray:
        return (np.asarray(x, dtype=float) - self.lower_array) / self.width

    def denormalize(self, z) -> np.ndarray:
        return self.lower_array + np.asarray(z, dtype=float) * self.width

    def contains(self, x) -> bool:
        x = np.asarray(x, dtype=float)
        return bool(np.all(x >= self.lower_array) and np.all(x <= self.upper_array))


# ==================== Evaluation ====================

def is_violated(outcome: ConstraintOutcome, tol: float = FEASIBILITY_TOL) -> bool:
    """Quantifiable: g < -tol. Nonquantifiable: reported failure."""
    if outcome.kind.quantifiable:
        return outcome.value is None or outcome.value < -tol
    return not outcome.satisfied


def _check_point(problem: ProblemSpec, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape != (problem.dimension,):
        raise ContractError(
            f"{problem.name}: expected a vector of length {problem.dimension}, got shape {x.shape}"
        )
    if not np.all(np.isfinite(x)) or not problem.contains(x):
        raise ContractError(f"{problem.name}: point outside the bound box: {x.tolist()}")
    return x


def evaluate(
    problem: ProblemSpec, x, feasibility_tol: float = FEASIBILITY_TOL
) -> EvaluationOutcome:
    """
    Run every evaluator of ``problem`` once at ``x``.

    A SimulationError from any evaluator, a non-finite value, or a violated
    NUSH constraint is a hidden failure. The objective is withheld whenever an
    unrelaxable constraint is violated.
    """
    x = _check_point(problem, x)
    crashed = False
    raw: List[Optional[float]] = []

    with np.errstate(all="ignore"):
        for constraint in problem.constraints:
            try:
                value = float(constraint.evaluator(x.copy()))
            except SimulationError:
                crashed, value = True, None
            else:
                if not math.isfinite(value):
                    crashed, value = True, None
                elif constraint.kind == ConstraintKind.NUSH and value < 0:
                    crashed = True
            raw.append(value)

        try:
            objective = float(problem.objective(x.copy()))
        except SimulationError:
            crashed, objective = True, None
        else:
            if not math.isfinite(objective):
                crashed, objective = True, None

    if crashed:
        return EvaluationOutcome(
            objective=None,
            constraints=[ConstraintOutcome(kind=c.kind) for c in problem.constraints],
            hidden_failure=True,
        )

    outcomes = []
    for constraint, value in zip(problem.constraints, raw):
        if constraint.kind.quantifiable:
            outcomes.append(
                ConstraintOutcome(kind=constraint.kind, value=value, satisfied=value >= 0)
            )
        else:
            outcomes.append(ConstraintOutcome(kind=constraint.kind, satisfied=value >= 0))

    unrelaxable_violated = any(
        not o.kind.relaxable and is_violated(o, feasibility_tol) for o in outcomes
    )
    return EvaluationOutcome(
        objective=None if unrelaxable_violated else objective,
        constraints=outcomes,
        hidden_failure=False,
    )


class BudgetedEvaluator:
    """Per-run evaluation counter; the only way the solver touches the problem."""

    def __init__(self, problem: ProblemSpec, budget: int, feasibility_tol: float = FEASIBILITY_TOL):
        if budget < 0:
            raise ContractError("budget must be non-negative")
        self.problem = problem
        self.budget = budget
        self.feasibility_tol = feasibility_tol
        self._count = 0

    @property
    def count(self) -> int:
        return self._count

    @property
    def remaining(self) -> int:
        return self.budget - self._count

    @property
    def exhausted(self) -> bool:
        return self._count >= self.budget

    def evaluate(self, x) -> EvaluationOutcome:
        if self.exhausted:
            raise BudgetExhaustedError(
                f"{self.problem.name}: budget of {self.budget} evaluations exhausted"
            )
        x = _check_point(self.problem, x)
        self._count += 1
        return evaluate(self.problem, x, self.feasibility_tol)


# ==================== Scenarios ====================

_FIRST_KIND = {
    Scenario.SET2: ConstraintKind.NRSK,
    Scenario.SET3: ConstraintKind.QUSK,
    Scenario.SET4: ConstraintKind.NUSK,
}


def relabel(problem: ProblemSpec, scenario: Union[Scenario, str, int]) -> ProblemSpec:
    """Reassign constraint kinds for a scenario. Evaluators are untouched."""
    scenario = Scenario.parse(scenario)
    kinds = [ConstraintKind.QRSK] * problem.n_constraints
    if scenario != Scenario.SET1:
        if problem.n_constraints < 2:
            raise ScenarioError(
                f"{problem.name} has {problem.n_constraints} constraint(s); "
                f"{scenario.value} needs at least 2"
            )
        kinds[0] = _FIRST_KIND[scenario]
    constraints = tuple(
        c.model_copy(update={"kind": kind}) for c, kind in zip(problem.constraints, kinds)
    )
    return problem.model_copy(update={"constraints": constraints})


# ==================== External Problems ====================

class _SubprocessSimulation:
    """Runs a user command once per point and caches the last reply."""

    def __init__(self, command: Union[str, Sequence[str]], n_constraints: int, timeout: float):
        self.command = shlex.split(command) if isinstance(command, str) else list(command)
        self.n_constraints = n_constraints
        self.timeout = timeout
        self._lock = threading.Lock()
        self._key: Optional[bytes] = None
        self._reply: Optional[np.ndarray] = None

    def __call__(self, x: np.ndarray) -> Optional[np.ndarray]:
        key = np.asarray(x, dtype=float).tobytes()
        with self._lock:
            if key != self._key:
                self._reply = self._run(x)
                self._key = key
            return self._reply

    def _run(self, x: np.ndarray) -> Optional[np.ndarray]:
        line = " ".join(f"{v:.17g}" for v in x) + "\n"
        try:
            completed = subprocess.run(
                self.command,
                input=line,
                capture_output=True,
                text=True,
                timeout=self.timeout,
            )
        except (OSError, subprocess.TimeoutExpired) as e:
            logger.warning(f"External simulation failed to run: {e}")
            return None

        if completed.returncode != 0:
            logger.warning(f"External simulation exited with code {completed.returncode}")
            return None

        reply = completed.stdout.strip().splitlines()
        if not reply or reply[0].strip().upper() == "FAIL":
            return None
        try:
            values = np.array([float(tok) for tok in reply[0].split()], dtype=float)
        except ValueError:
            logger.warning(f"Unparsable simulation output: {reply[0]!r}")
            return None
        if values.size != self.n_constraints + 1:
            logger.warning(
                f"Expected {self.n_constraints + 1} values from simulation, got {values.size}"
            )
            return None
        return values


def external_problem(
    name: str,
    command: Union[str, Sequence[str]],
    lower: Sequence[float],
    upper: Sequence[float],
    kinds: Sequence[Union[ConstraintKind, str]],
    known_optimum: Optional[float] = None,
    timeout: Optional[float] = None,
) -> ProblemSpec:
    """
    Wrap an external simulator as a ProblemSpec.

    The command reads one line (x as whitespace-separated decimals) and writes
    one line: the objective followed by one value per constraint, or FAIL.
    """
    if timeout is None:
        from gsdo.config import get_settings

        timeout = get_settings().external_timeout

    kinds = [ConstraintKind(k) for k in kinds]
    simulation = _SubprocessSimulation(command, len(kinds), timeout)

    def reply_value(position: int) -> Evaluator:
        def evaluator(x: np.ndarray) -> float:
            reply = simulation(x)
            if reply is None:
                raise SimulationError(f"{name}: simulation failed")
            return float(reply[position])

        return evaluator

    return ProblemSpec(
        name=name,
        lower=tuple(float(v) for v in lower),
        upper=tuple(float(v) for v in upper),
        objective=reply_value(0),
        constraints=tuple(
            ConstraintDef(kind=kind, evaluator=reply_value(j + 1), name=f"g{j + 1}")
            for j, kind in enumerate(kinds)
        ),
        known_optimum=known_optimum,
        source=f"external: {command}",
    )
