"""Cubic radial basis function interpolation with a linear polynomial tail.

    s(x) = sum_i gamma_i ||x - x_i||^3 + lambda^T (x, 1)

Coefficients solve the saddle-point system

    [ Phi  P ] [gamma ]   [F]
    [ P^T  0 ] [lambda] = [0]

with Phi_ij = ||x_i - x_j||^3 and P = [X e]. Surrogates are always fitted in
normalized (unit box) coordinates.
"""

import logging
import warnings
from dataclasses import dataclass
from typing import Dict, Optional

import numpy as np
import pandas as pd
from scipy.linalg import LinAlgError, LinAlgWarning, lu_factor, lu_solve
from scipy.spatial.distance import cdist, pdist, squareform

from gsdo.exceptions import ContractError, FitError, RankError
from gsdo.models import ConstraintKind, PointClass
from gsdo.services.archive import DUPLICATE_TOL, Archive

logger = logging.getLogger(__name__)

RESIDUAL_TOL = 1e-8
RIDGE_FACTOR = 1e-10


@dataclass(frozen=True)
class RbfModel:
    """Fitted interpolant. ``lam`` holds the d slopes followed by the constant."""

    centers: np.ndarray
    gamma: np.ndarray
    lam: np.ndarray
    center_indices: Optional[np.ndarray] = None

    @property
    def dimension(self) -> int:
        return self.centers.shape[1]

    def __call__(self, X) -> np.ndarray:
        """Evaluate at every row of ``X``."""
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if X.shape[0] == 0:
            return np.empty(0)
        phi = cdist(X, self.centers) ** 3
        return phi @ self.gamma + X @ self.lam[:-1] + self.lam[-1]


def eval_rbf(model: RbfModel, x) -> float:
    return float(model(np.asarray(x, dtype=float).reshape(1, -1))[0])


def affine_rank(points: np.ndarray) -> int:
    """Rank of [P^T e]: the points augmented with a column of ones."""
    points = np.atleast_2d(points)
    if points.shape[0] == 0:
        return 0
    return int(np.linalg.matrix_rank(np.column_stack([points, np.ones(len(points))])))


def _solve(A: np.ndarray, b: np.ndarray) -> Optional[np.ndarray]:
    with warnings.catch_warnings():
        warnings.simplefilter("error", LinAlgWarning)
        try:
            sol = lu_solve(lu_factor(A, check_finite=False), b, check_finite=False)
        except (LinAlgError, LinAlgWarning, ValueError):
            return None

    if not np.all(np.isfinite(sol)):
        return None
    residual = np.linalg.norm(A @ sol - b, np.inf)
    scale = np.linalg.norm(A, np.inf) * np.linalg.norm(sol, np.inf) + np.linalg.norm(b, np.inf)
    if residual > RESIDUAL_TOL * max(scale, np.finfo(float).tiny):
        return None
    return sol


def fit_rbf(points, values, center_indices: Optional[np.ndarray] = None) -> RbfModel:
    """Interpolate ``values`` at ``points`` (n x d)."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    values = np.asarray(values, dtype=float).ravel()
    n, d = points.shape
    if values.shape[0] != n:
        raise ContractError(f"{n} points but {values.shape[0]} values")
    if not np.all(np.isfinite(values)):
        raise ContractError("values must be finite")
    if n > 1 and np.min(pdist(points)) < DUPLICATE_TOL:
        raise ContractError("interpolation points must be pairwise distinct")
    if n < d + 1 or affine_rank(points) < d + 1:
        raise RankError(f"need {d + 1} affinely independent points, got rank {affine_rank(points)}")

    phi = squareform(pdist(points)) ** 3
    P = np.column_stack([points, np.ones(n)])
    A = np.block([[phi, P], [P.T, np.zeros((d + 1, d + 1))]])
    b = np.concatenate([values, np.zeros(d + 1)])

    sol = _solve(A, b)
    if sol is None:
        # trace(Phi) is zero for the cubic kernel, so scale by the mean entry
        ridge = RIDGE_FACTOR * max(float(np.mean(np.abs(phi))), 1.0)
        logger.warning(f"RBF system singular with {n} centers; retrying with ridge {ridge:.3e}")
        A[:n, :n] += ridge * np.eye(n)
        sol = _solve(A, b)
        if sol is None:
            raise FitError(f"RBF system singular with {n} centers after regularization")

    return RbfModel(
        centers=points.copy(),
        gamma=sol[:n],
        lam=sol[n:],
        center_indices=None if center_indices is None else np.asarray(center_indices),
    )


# ==================== Archive Surrogates ====================

def candidate_centers(archive: Archive, j: Optional[int] = None) -> np.ndarray:
    """
    X_F, X_I and X_S; for a QUSK constraint ``j`` also the U points that
    satisfy j. ``j=None`` gives the objective's center set.
    """
    idx = archive.indices(PointClass.F, PointClass.I, PointClass.S)
    if j is not None and archive.kinds[j] == ConstraintKind.QUSK:
        idx = np.union1d(idx, archive.feasible_for(j)).astype(int)
    return idx


def _cap_centers(archive: Archive, idx: np.ndarray, cap: Optional[int]) -> np.ndarray:
    """Keep the most recent half of the cap plus the best objectives among the rest."""
    if cap is None or len(idx) <= cap:
        return idx
    n_recent = cap // 2
    recent, rest = idx[-n_recent:], idx[:-n_recent]
    f = archive.objectives[rest]
    order = np.argsort(np.where(np.isnan(f), np.inf, f), kind="stable")
    chosen = np.sort(np.concatenate([recent, rest[order[: cap - n_recent]]]))
    if affine_rank(archive.Z[chosen]) < archive.problem.dimension + 1:
        return idx
    return chosen


def _rank_ok(archive: Archive, idx: np.ndarray) -> bool:
    d = archive.problem.dimension
    return len(idx) >= d + 1 and affine_rank(archive.Z[idx]) == d + 1


def rank_ready(archive: Archive, problem=None) -> bool:
    """True when every quantifiable constraint has an affinely spanning center set."""
    if len(archive) == 0:
        return False
    kinds = archive.kinds if problem is None else problem.kinds
    for j, kind in enumerate(kinds):
        if kind.quantifiable and not _rank_ok(archive, candidate_centers(archive, j)):
            return False
    return True


def objective_rank_ready(archive: Archive) -> bool:
    return _rank_ok(archive, candidate_centers(archive))


def fit_constraint_surrogate(archive: Archive, j: int, center_cap: Optional[int] = None) -> RbfModel:
    """Fit g_j over its candidate centers."""
    if not archive.kinds[j].quantifiable:
        raise ContractError(f"constraint {j} is not quantifiable")
    idx = candidate_centers(archive, j)
    if not _rank_ok(archive, idx):
        raise RankError(f"constraint {j}: candidate centers are rank deficient")
    idx = _cap_centers(archive, idx, center_cap)
    return fit_rbf(archive.Z[idx], archive.constraint_values[idx, j], center_indices=idx)


def fit_constraint_surrogates(
    archive: Archive, center_cap: Optional[int] = None
) -> Dict[int, RbfModel]:
    return {
        j: fit_constraint_surrogate(archive, j, center_cap)
        for j, kind in enumerate(archive.kinds)
        if kind.quantifiable
    }


def fit_objective_surrogate(archive: Archive, center_cap: Optional[int] = None) -> RbfModel:
    """Fit f over X_F, X_I and X_S only."""
    idx = candidate_centers(archive)
    if not _rank_ok(archive, idx):
        raise RankError("objective: candidate centers are rank deficient")
    idx = _cap_centers(archive, idx, center_cap)
    return fit_rbf(archive.Z[idx], archive.objectives[idx], center_indices=idx)


def model_to_frame(model: RbfModel) -> pd.DataFrame:
    """Centers with their gamma, followed by one ``tail`` row holding lambda."""
    d = model.dimension
    columns = [f"x{i + 1}" for i in range(d)]
    frame = pd.DataFrame(model.centers, columns=columns)
    frame.insert(0, "role", "center")
    frame["coef"] = model.gamma
    tail = {"role": "tail", **dict(zip(columns, model.lam[:-1])), "coef": model.lam[-1]}
    return pd.concat([frame, pd.DataFrame([tail])], ignore_index=True)
