"""Tests for Latin hypercube designs and the random ball point."""

import numpy as np
import pytest

from gsdo.exceptions import ContractError
from gsdo.services.archive import Archive
from gsdo.services.problem import evaluate
from gsdo.services.sampling import ball_radius, latin_hypercube, random_ball_point
from tests.conftest import make_problem


@pytest.mark.parametrize("n, d", [(1, 1), (7, 2), (20, 5)])
def test_one_point_per_stratum(n, d):
    lower, upper = -2.0 * np.ones(d), 3.0 * np.ones(d)
    X = latin_hypercube(lower, upper, n, np.random.default_rng(0))
    assert X.shape == (n, d)
    assert np.all(X >= lower) and np.all(X <= upper)
    strata = np.floor((X - lower) / (upper - lower) * n).astype(int)
    for column in strata.T:
        assert sorted(column.tolist()) == list(range(n))


def test_designs_are_reproducible():
    a = latin_hypercube([0, 0], [1, 1], 5, np.random.default_rng(42))
    b = latin_hypercube([0, 0], [1, 1], 5, np.random.default_rng(42))
    assert np.array_equal(a, b)


def test_empty_design_is_rejected():
    with pytest.raises(ContractError):
        latin_hypercube([0], [1], 0, np.random.default_rng(0))


def _archive_with(points, lower=(0.0, 0.0), upper=(10.0, 5.0)):
    problem = make_problem(lambda x: 0.0, [lambda x: 1.0], lower=lower, upper=upper)
    archive = Archive(problem)
    for x in points:
        archive.filter_point(np.array(x), evaluate(problem, np.array(x)))
    return archive


def test_ball_radius():
    assert ball_radius(5.0, 2, 10.0, 100.0) == pytest.approx(0.5)
    assert ball_radius(5.0, 4, 0.001, 1.0) == pytest.approx(2.0)


def test_ball_point_is_near_the_latest_feasible_point():
    archive = _archive_with([[1.0, 1.0], [6.0, 2.5]])
    rng = np.random.default_rng(1)
    radius = ball_radius(archive.problem.delta_lu, 2, 10.0, 100.0)
    for _ in range(20):
        y = random_ball_point(archive, 10.0, 100.0, rng)
        assert np.linalg.norm(y - [6.0, 2.5]) <= radius
        assert archive.problem.contains(y)
        assert not archive.contains(y)


def test_ball_point_falls_back_to_lhs():
    archive = _archive_with([[6.0, 2.5]])
    # a vanishing radius makes every ball point a duplicate of the center
    y = random_ball_point(archive, 1e14, 100.0, np.random.default_rng(2))
    assert archive.problem.contains(y)
    assert not archive.contains(y)


def test_ball_point_needs_a_feasible_point():
    problem = make_problem(lambda x: 0.0, [lambda x: -1.0])
    archive = Archive(problem)
    archive.filter_point(np.array([0.5, 0.5]), evaluate(problem, np.array([0.5, 0.5])))
    with pytest.raises(ContractError):
        random_ball_point(archive, 10.0, 100.0, np.random.default_rng(0))
