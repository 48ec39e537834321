"""Evaluated-point history partitioned into the F/I/S/U/H classes."""

import logging
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from gsdo.exceptions import ContractError, DuplicatePointError
from gsdo.models import (
    ConstraintKind,
    EvaluatedPoint,
    EvaluationOutcome,
    PointClass,
)
from gsdo.services.problem import FEASIBILITY_TOL, ProblemSpec, is_violated

logger = logging.getLogger(__name__)

DUPLICATE_TOL = 1e-10


def classify(
    kinds: Sequence[ConstraintKind],
    outcome: EvaluationOutcome,
    tol: float = FEASIBILITY_TOL,
) -> Tuple[PointClass, Optional[int]]:
    """
    Classify an outcome. Returns the class and, for U, the violated QUSK index.

    Priority: hidden failure / NUSH / NUSK / two or more QUSK -> H; one QUSK -> U;
    any NRSK -> S; QRSK only -> I; nothing violated -> F.
    """
    if len(outcome.constraints) != len(kinds):
        raise ContractError(
            f"outcome has {len(outcome.constraints)} constraints, problem has {len(kinds)}"
        )
    if outcome.hidden_failure:
        if outcome.objective is not None:
            raise ContractError("hidden failure reported together with an objective value")
        return PointClass.H, None

    violated = [is_violated(o, tol) for o in outcome.constraints]

    def by_kind(kind: ConstraintKind) -> List[int]:
        return [j for j, (k, v) in enumerate(zip(kinds, violated)) if v and k == kind]

    if by_kind(ConstraintKind.NUSH) or by_kind(ConstraintKind.NUSK):
        return PointClass.H, None
    qusk = by_kind(ConstraintKind.QUSK)
    if len(qusk) >= 2:
        return PointClass.H, None
    if len(qusk) == 1:
        return PointClass.U, qusk[0]

    if outcome.objective is None:
        raise ContractError("objective missing although no unrelaxable constraint is violated")
    if by_kind(ConstraintKind.NRSK):
        return PointClass.S, None
    if by_kind(ConstraintKind.QRSK):
        return PointClass.I, None
    return PointClass.F, None


class Archive:
    """
    Ordered history of evaluated points for one run.

    Coordinates are kept both raw and normalized to the unit box; quantifiable
    constraint values are kept in a dense matrix with NaN where unknown.
    """

    def __init__(
        self,
        problem: ProblemSpec,
        feasibility_tol: float = FEASIBILITY_TOL,
        duplicate_tol: float = DUPLICATE_TOL,
    ):
        self.problem = problem
        self.kinds = problem.kinds
        self.feasibility_tol = feasibility_tol
        self.duplicate_tol = duplicate_tol

        d, m = problem.dimension, problem.n_constraints
        self.points: List[EvaluatedPoint] = []
        self._x = np.empty((0, d))
        self._z = np.empty((0, d))
        self._f = np.empty(0)
        self._g = np.empty((0, m))
        self._classes: List[PointClass] = []
        self._members: Dict[PointClass, List[int]] = {cls: [] for cls in PointClass}
        self.u_violations: Dict[int, int] = {}

    # ==================== Accessors ====================

    def __len__(self) -> int:
        return len(self.points)

    @property
    def eval_count(self) -> int:
        return len(self.points)

    @property
    def X(self) -> np.ndarray:
        """Raw coordinates, one row per point."""
        return self._x

    @property
    def Z(self) -> np.ndarray:
        """Normalized coordinates, one row per point."""
        return self._z

    @property
    def objectives(self) -> np.ndarray:
        return self._f

    @property
    def constraint_values(self) -> np.ndarray:
        return self._g

    @property
    def classes(self) -> List[PointClass]:
        return list(self._classes)

    def indices(self, *classes: PointClass) -> np.ndarray:
        """Insertion-ordered indices of points in any of ``classes``."""
        merged = sorted(i for cls in classes for i in self._members[cls])
        return np.asarray(merged, dtype=int)

    def size(self, cls: PointClass) -> int:
        return len(self._members[cls])

    def counts(self) -> Dict[str, int]:
        return {cls.value: len(idx) for cls, idx in self._members.items()}

    def contains(self, x) -> bool:
        """True if a point within the duplicate tolerance (normalized) is archived."""
        return self.contains_normalized(self.problem.normalize(x))

    def contains_normalized(self, z) -> bool:
        if len(self.points) == 0:
            return False
        dist = np.max(np.abs(self._z - np.asarray(z, dtype=float)), axis=1)
        return bool(np.min(dist) <= self.duplicate_tol)

    # ==================== Filter Point ====================

    def filter_point(self, x, outcome: EvaluationOutcome) -> PointClass:
        """Classify ``outcome`` and append the point with its class."""
        x = np.asarray(x, dtype=float)
        if self.contains(x):
            raise DuplicatePointError(f"point already archived: {x.tolist()}")

        point_class, violated_qusk = classify(self.kinds, outcome, self.feasibility_tol)
        index = len(self.points)

        g_row = np.full(len(self.kinds), np.nan)
        for j, c in enumerate(outcome.constraints):
            if c.value is not None:
                g_row[j] = c.value

        self.points.append(
            EvaluatedPoint(
                index=index,
                x=x.tolist(),
                point_class=point_class,
                objective=outcome.objective,
                constraints=list(outcome.constraints),
                hidden_failure=outcome.hidden_failure,
                violated_qusk=violated_qusk,
            )
        )
        self._x = np.vstack([self._x, x])
        self._z = np.vstack([self._z, self.problem.normalize(x)])
        self._f = np.append(
            self._f, np.nan if outcome.objective is None else outcome.objective
        )
        self._g = np.vstack([self._g, g_row])
        self._classes.append(point_class)
        self._members[point_class].append(index)
        if violated_qusk is not None:
            self.u_violations[index] = violated_qusk

        self._check_partition()
        logger.debug(f"Point {index} classified {point_class.value}: {x.tolist()}")
        return point_class

    def _check_partition(self):
        total = sum(len(idx) for idx in self._members.values())
        assert total == len(self.points), "archive partition out of sync"

    # ==================== Queries ====================

    def best_feasible(self) -> Optional[Tuple[np.ndarray, float]]:
        """Lowest objective in X_F; the earliest point wins ties."""
        feasible = self._members[PointClass.F]
        if not feasible:
            return None
        best = min(feasible, key=lambda i: (self._f[i], i))
        return self._x[best].copy(), float(self._f[best])

    def latest_feasible(self) -> np.ndarray:
        feasible = self._members[PointClass.F]
        if not feasible:
            raise ContractError("no feasible point archived")
        return self._x[feasible[-1]].copy()

    def feasible_for(self, j: int) -> np.ndarray:
        """U points whose violated QUSK constraint is not ``j``."""
        return np.asarray(
            [i for i in self._members[PointClass.U] if self.u_violations[i] != j], dtype=int
        )

    # ==================== Export ====================

    def to_frame(self) -> pd.DataFrame:
        """One row per point: coordinates, class, objective, constraint values/flags."""
        rows = []
        for p in self.points:
            row = {f"x{i + 1}": v for i, v in enumerate(p.x)}
            row["class"] = p.point_class.value
            row["objective"] = p.objective
            for j, c in enumerate(p.constraints):
                if c.kind.quantifiable:
                    row[f"g{j + 1}"] = c.value
                else:
                    row[f"g{j + 1}"] = None if c.satisfied is None else ("pass" if c.satisfied else "fail")
            rows.append(row)
        return pd.DataFrame(rows)

    def to_csv(self, path: Union[str, Path]):
        self.to_frame().to_csv(path, index=False, na_rep="NA")
