"""Latin hypercube designs and the random-ball fallback point."""

import logging
import math

import numpy as np
from scipy.stats import qmc

from gsdo.exceptions import ContractError
from gsdo.services.archive import Archive

logger = logging.getLogger(__name__)

BALL_RETRIES = 100


def latin_hypercube(lower, upper, n: int, rng: np.random.Generator) -> np.ndarray:
    """``n`` points in [lower, upper], one per stratum in every dimension."""
    if n < 1:
        raise ContractError("latin_hypercube needs n >= 1")
    lower = np.asarray(lower, dtype=float)
    upper = np.asarray(upper, dtype=float)
    unit = qmc.LatinHypercube(d=len(lower), rng=rng).random(n)
    return qmc.scale(unit, lower, upper)


def ball_radius(delta_lu: float, d: int, delta_r: float, delta_d: float) -> float:
    return min(delta_lu / delta_r, delta_d * math.sqrt(d))


def random_ball_point(
    archive: Archive,
    delta_r: float,
    delta_d: float,
    rng: np.random.Generator,
) -> np.ndarray:
    """
    Uniform point in the ball around the latest feasible point, inside the box
    and not yet archived. Falls back to a fresh LHS point after 100 rejections.
    """
    problem = archive.problem
    center = archive.latest_feasible()
    d = problem.dimension
    radius = ball_radius(problem.delta_lu, d, delta_r, delta_d)

    for _ in range(BALL_RETRIES):
        direction = rng.standard_normal(d)
        norm = np.linalg.norm(direction)
        if norm == 0:
            continue
        y = center + direction / norm * radius * rng.random() ** (1.0 / d)
        if problem.contains(y) and not archive.contains(y):
            return y

    logger.warning(f"No admissible ball point after {BALL_RETRIES} tries; using an LHS point")
    while True:
        y = latin_hypercube(problem.lower_array, problem.upper_array, 1, rng)[0]
        if not archive.contains(y):
            return y
