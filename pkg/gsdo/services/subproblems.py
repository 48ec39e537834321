"""Surrogate subproblems solved by constrained differential evolution.

All subproblems live in normalized coordinates. Surrogates and the
classification constraint are vectorized callables mapping an (S, d) array
to (S,) values; a constraint is satisfied when its value is >= 0.
"""

import logging
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence

import numpy as np
from scipy.optimize import NonlinearConstraint, differential_evolution
from scipy.spatial.distance import cdist
from scipy.stats import qmc

from gsdo.exceptions import ContractError
from gsdo.models import PointClass
from gsdo.services.archive import Archive

logger = logging.getLogger(__name__)

VIOLATION_TOL = 1e-8
DEDUP_TOL = 1e-6

VectorFunction = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class SubproblemSolution:
    """Best DE individual. ``x`` excludes the auxiliary variable of P2/P3."""

    x: np.ndarray
    aux: float
    feasible: bool
    constraint_violation: float
    evaluations: int = 0


@dataclass(frozen=True)
class DESettings:
    population: Optional[int] = None
    mutation: float = 0.7
    recombination: float = 0.9
    budget_per_dim: int = 4000
    n_starts: Optional[int] = None
    tol: float = 1e-6
    atol: float = 1e-9

    @classmethod
    def from_config(cls, config) -> "DESettings":
        return cls(
            population=config.de_population,
            mutation=config.de_mutation,
            recombination=config.de_recombination,
            budget_per_dim=config.de_budget_per_dim,
            n_starts=config.p4_starts,
            tol=config.de_tol,
            atol=config.de_atol,
        )

    def budget(self, d: int) -> int:
        return self.budget_per_dim * d

    def population_for(self, n_vars: int) -> int:
        return self.population or max(20, 10 * n_vars)


def unit_box(d: int) -> np.ndarray:
    return np.column_stack([np.zeros(d), np.ones(d)])


# ==================== DE Engine ====================

def _rows(xt: np.ndarray) -> np.ndarray:
    """scipy hands vectorized callables (N, S) or (N,); we work on (S, N)."""
    return xt[None, :] if xt.ndim == 1 else xt.T


def _stack(constraints: Sequence[VectorFunction]) -> VectorFunction:
    def combined(X: np.ndarray) -> np.ndarray:
        parts = [np.asarray(c(X), dtype=float).reshape(X.shape[0], -1) for c in constraints]
        return np.hstack(parts)

    return combined


def total_violation(values: np.ndarray) -> np.ndarray:
    """Sum of max(0, -c) per row."""
    return np.sum(np.maximum(0.0, -np.atleast_2d(values)), axis=1)


def de_minimize(
    objective: VectorFunction,
    constraints: Sequence[VectorFunction],
    bounds,
    rng: np.random.Generator,
    budget: int,
    population: Optional[int] = None,
    mutation: float = 0.7,
    recombination: float = 0.9,
    tol: float = 1e-6,
    atol: float = 1e-9,
) -> SubproblemSolution:
    """
    DE/rand/1/bin with feasibility-rule selection.

    The population is a Latin hypercube of ``population`` members (default
    max(20, 10n)); at most ``budget // population - 1`` generations follow.
    The run stops early once the population energies have converged
    (std <= atol + tol * |mean|); tol = atol = 0 spends the whole budget.
    """
    bounds = np.asarray(bounds, dtype=float).reshape(-1, 2)
    n = bounds.shape[0]
    pop = population or max(20, 10 * n)
    if budget < pop:
        raise ContractError(f"DE budget {budget} is smaller than the population {pop}")
    maxiter = budget // pop - 1

    constraint_fn = _stack(constraints) if constraints else None

    def energies(xt: np.ndarray) -> np.ndarray:
        X = _rows(xt)
        if X.shape[0] == 0:
            return np.empty(0)
        return np.asarray(objective(X), dtype=float).ravel()

    scipy_constraints = ()
    if constraint_fn is not None:

        def constraint_values(xt: np.ndarray) -> np.ndarray:
            X = _rows(xt)
            if X.shape[0] == 0:
                return np.empty((0, 0))
            values = constraint_fn(X)
            return values[0] if xt.ndim == 1 else values.T

        scipy_constraints = (NonlinearConstraint(constraint_values, 0.0, np.inf),)

    init = qmc.scale(qmc.LatinHypercube(d=n, rng=rng).random(pop), bounds[:, 0], bounds[:, 1])

    result = differential_evolution(
        energies,
        bounds=bounds,
        strategy="rand1bin",
        maxiter=maxiter,
        init=init,
        mutation=mutation,
        recombination=recombination,
        rng=rng,
        polish=False,
        tol=tol,
        atol=atol,
        updating="deferred",
        vectorized=True,
        constraints=scipy_constraints,
    )

    x = np.clip(np.asarray(result.x, dtype=float), bounds[:, 0], bounds[:, 1])
    violation = 0.0
    if constraint_fn is not None:
        violation = float(total_violation(constraint_fn(x[None, :]))[0])
    value = float(np.asarray(objective(x[None, :]), dtype=float).ravel()[0])
    return SubproblemSolution(
        x=x,
        aux=value,
        feasible=violation <= VIOLATION_TOL,
        constraint_violation=violation,
        evaluations=int(result.nfev),
    )


# ==================== Subproblem Wrappers ====================

def _on_point(fn: VectorFunction, d: int) -> VectorFunction:
    """Lift a function of x to the augmented vector (x, aux)."""
    return lambda W: fn(W[:, :d])


def _min_sq_distance(Z: np.ndarray, anchors: np.ndarray) -> np.ndarray:
    return cdist(Z, anchors, "sqeuclidean")


def _feasible_points(archive: Archive) -> np.ndarray:
    idx = archive.indices(PointClass.F)
    if len(idx) == 0:
        raise ContractError("subproblem needs at least one feasible point")
    return archive.Z[idx]


def _is_duplicate(archive: Optional[Archive], z: np.ndarray) -> bool:
    return archive is not None and archive.contains_normalized(z)


def solve_p2(
    archive: Optional[Archive],
    surrogates: Sequence[VectorFunction],
    gc: VectorFunction,
    bounds,
    rng: np.random.Generator,
    de: DESettings = DESettings(),
) -> Optional[SubproblemSolution]:
    """
    max z  s.t.  g_j^s(x) >= z,  l + z <= x <= u - z,  z >= 0,  g_c(x) >= 0.

    Returns None when the best individual is infeasible or already archived.
    """
    bounds = np.asarray(bounds, dtype=float).reshape(-1, 2)
    d = bounds.shape[0]
    lo, hi = bounds[:, 0], bounds[:, 1]
    z_max = 0.5 * float(np.min(hi - lo))

    constraints: List[VectorFunction] = [
        (lambda W, s=s: np.asarray(s(W[:, :d])) - W[:, d]) for s in surrogates
    ]
    constraints.append(lambda W: np.hstack([W[:, :d] - lo - W[:, d:], hi - W[:, :d] - W[:, d:]]))
    constraints.append(_on_point(gc, d))

    solution = de_minimize(
        lambda W: -W[:, d],
        constraints,
        np.vstack([bounds, [0.0, z_max]]),
        rng,
        de.budget(d),
        population=de.population_for(d + 1),
        mutation=de.mutation,
        recombination=de.recombination,
        tol=de.tol,
        atol=de.atol,
    )
    x, z = solution.x[:d], float(solution.x[d])
    if not solution.feasible:
        logger.debug(f"P2 infeasible (violation {solution.constraint_violation:.3e})")
        return None
    if _is_duplicate(archive, x):
        logger.debug("P2 solution already archived")
        return None
    return SubproblemSolution(
        x=x,
        aux=z,
        feasible=True,
        constraint_violation=solution.constraint_violation,
        evaluations=solution.evaluations,
    )


def solve_p3(
    archive: Archive,
    surrogates: Sequence[VectorFunction],
    gc: VectorFunction,
    bounds,
    rng: np.random.Generator,
    de: DESettings = DESettings(),
) -> SubproblemSolution:
    """
    max y  s.t.  g_j^s(x) >= 0,  ||x - x_i||^2 >= y^2 for x_i in X_F,  g_c(x) >= 0.

    ``aux`` is the achieved distance; it is 0 when no admissible new point was found.
    """
    anchors = _feasible_points(archive)
    bounds = np.asarray(bounds, dtype=float).reshape(-1, 2)
    d = bounds.shape[0]
    y_max = float(np.linalg.norm(bounds[:, 1] - bounds[:, 0]))

    constraints: List[VectorFunction] = [_on_point(s, d) for s in surrogates]
    constraints.append(_on_point(gc, d))
    constraints.append(lambda W: _min_sq_distance(W[:, :d], anchors) - W[:, d:] ** 2)

    solution = de_minimize(
        lambda W: -W[:, d],
        constraints,
        np.vstack([bounds, [0.0, y_max]]),
        rng,
        de.budget(d),
        population=de.population_for(d + 1),
        mutation=de.mutation,
        recombination=de.recombination,
        tol=de.tol,
        atol=de.atol,
    )
    x = solution.x[:d]
    delta = 0.0
    if solution.feasible and not _is_duplicate(archive, x):
        actual = float(np.sqrt(np.min(_min_sq_distance(x[None, :], anchors))))
        delta = max(0.0, min(float(solution.x[d]), actual))
    return SubproblemSolution(
        x=x,
        aux=delta,
        feasible=solution.feasible,
        constraint_violation=solution.constraint_violation,
        evaluations=solution.evaluations,
    )


def solve_p4_multistart(
    objective_surrogate: VectorFunction,
    surrogates: Sequence[VectorFunction],
    gc: VectorFunction,
    bounds,
    rng: np.random.Generator,
    n_starts: Optional[int] = None,
    de: DESettings = DESettings(),
) -> List[SubproblemSolution]:
    """
    min s(x)  s.t.  g_j^s(x) >= 0,  g_c(x) >= 0, from ``n_starts`` independent
    DE runs. Feasible results are deduplicated and sorted by s(x).
    """
    bounds = np.asarray(bounds, dtype=float).reshape(-1, 2)
    d = bounds.shape[0]
    n_starts = n_starts or de.n_starts or min(10, d + 2)
    constraints = list(surrogates) + [gc]

    found: List[SubproblemSolution] = []
    for _ in range(n_starts):
        solution = de_minimize(
            objective_surrogate,
            constraints,
            bounds,
            rng,
            de.budget(d),
            population=de.population_for(d),
            mutation=de.mutation,
            recombination=de.recombination,
            tol=de.tol,
            atol=de.atol,
        )
        if not solution.feasible:
            continue
        if any(np.linalg.norm(solution.x - other.x) <= DEDUP_TOL for other in found):
            continue
        found.append(solution)

    found.sort(key=lambda s: s.aux)
    logger.debug(f"P4: {len(found)} distinct feasible minimizers from {n_starts} starts")
    return found


def solve_p5(
    objective_surrogate: VectorFunction,
    surrogates: Sequence[VectorFunction],
    gc: VectorFunction,
    bounds,
    delta: float,
    archive: Archive,
    rng: np.random.Generator,
    de: DESettings = DESettings(),
) -> Optional[SubproblemSolution]:
    """P4 plus ||x - x_i||^2 >= delta^2 for every x_i in X_F. None if infeasible."""
    if not delta > 0:
        raise ContractError("P5 needs delta > 0")
    anchors = _feasible_points(archive)
    bounds = np.asarray(bounds, dtype=float).reshape(-1, 2)
    d = bounds.shape[0]

    constraints = list(surrogates) + [gc]
    constraints.append(lambda Z: _min_sq_distance(Z, anchors) - delta**2)

    solution = de_minimize(
        objective_surrogate,
        constraints,
        bounds,
        rng,
        de.budget(d),
        population=de.population_for(d),
        mutation=de.mutation,
        recombination=de.recombination,
        tol=de.tol,
        atol=de.atol,
    )
    if not solution.feasible or _is_duplicate(archive, solution.x):
        logger.debug(f"P5 infeasible at delta={delta:.3e}")
        return None
    return solution
