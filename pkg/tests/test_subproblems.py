"""Tests for the differential evolution engine and the surrogate subproblems."""

import numpy as np
import pytest
from scipy.stats import qmc

from gsdo.config import SolverConfig
from gsdo.exceptions import ContractError
from gsdo.services.archive import Archive
from gsdo.services.classifier import constant_gc
from gsdo.services.problem import evaluate
from gsdo.services.subproblems import (
    DESettings,
    de_minimize,
    solve_p2,
    solve_p3,
    solve_p4_multistart,
    solve_p5,
    total_violation,
    unit_box,
)
from tests.conftest import make_problem

DE = DESettings(budget_per_dim=3000)
GC = constant_gc(1.0)


def _rng(seed=0):
    return np.random.default_rng(seed)


def _feasible_archive(points):
    problem = make_problem(lambda x: 0.0, [lambda x: 1.0])
    archive = Archive(problem)
    for x in points:
        archive.filter_point(np.array(x), evaluate(problem, np.array(x)))
    return archive


# ==================== DE Engine ====================

def test_de_recovers_unconstrained_minimum():
    target = np.array([0.3, 0.7])
    solution = de_minimize(
        lambda X: np.sum((X - target) ** 2, axis=1), [], unit_box(2), _rng(), budget=8000
    )
    assert solution.feasible
    assert solution.x == pytest.approx(target, abs=1e-3)


def test_de_recovers_minimum_on_a_nonconvex_boundary():
    # min x1 + x2 outside the disc of radius 0.5: the optimum 0.5 sits on an axis
    solution = de_minimize(
        lambda X: X.sum(axis=1),
        [lambda X: np.sum(X**2, axis=1) - 0.25],
        unit_box(2),
        _rng(1),
        budget=8000,
    )
    assert solution.feasible
    assert solution.aux == pytest.approx(0.5, abs=1e-3)


def test_de_recovers_active_bound_constraint():
    solution = de_minimize(
        lambda X: (X[:, 0] - 2.0) ** 2,
        [lambda X: 0.5 - X[:, 0]],
        unit_box(1),
        _rng(2),
        budget=4000,
    )
    assert solution.feasible
    assert solution.x[0] == pytest.approx(0.5, abs=1e-3)


def test_de_reports_infeasibility():
    solution = de_minimize(
        lambda X: X.sum(axis=1), [lambda X: -np.ones(len(X))], unit_box(2), _rng(), budget=2000
    )
    assert not solution.feasible
    assert solution.constraint_violation == pytest.approx(1.0)


def test_de_budget_must_cover_the_population():
    with pytest.raises(ContractError):
        de_minimize(lambda X: X.sum(axis=1), [], unit_box(2), _rng(), budget=10)


def test_de_is_deterministic_for_a_seed():
    def run():
        return de_minimize(
            lambda X: np.sum((X - 0.4) ** 2, axis=1), [], unit_box(3), _rng(9), budget=3000
        ).x

    assert np.array_equal(run(), run())


def test_de_minimizes_a_one_dimensional_quadratic():
    solution = de_minimize(lambda X: (X[:, 0] - 0.3) ** 2, [], unit_box(1), _rng(10), budget=2000)
    assert solution.feasible
    assert abs(solution.x[0] - 0.3) <= 1e-3


def test_de_one_dimensional_quadratic_with_a_lower_limit():
    solution = de_minimize(
        lambda X: (X[:, 0] - 0.3) ** 2, [lambda X: X[:, 0] - 0.7], unit_box(1), _rng(11), budget=2000
    )
    assert solution.feasible
    assert solution.x[0] == pytest.approx(0.7, abs=1e-3)


def test_de_budget_equal_to_population_returns_the_best_initial_point():
    def f(X):
        return (X[:, 0] - 0.3) ** 2

    init = qmc.LatinHypercube(d=1, rng=_rng(12)).random(20)[:, 0]
    solution = de_minimize(f, [], unit_box(1), _rng(12), budget=20)
    assert solution.evaluations == 20
    assert solution.feasible
    assert solution.x[0] == pytest.approx(init[np.argmin((init - 0.3) ** 2)], abs=1e-12)

    upper = init[init >= 0.7]
    constrained = de_minimize(f, [lambda X: X[:, 0] - 0.7], unit_box(1), _rng(12), budget=20)
    assert constrained.feasible
    assert constrained.x[0] == pytest.approx(upper.min(), abs=1e-12)

    hopeless = de_minimize(f, [lambda X: -np.ones(len(X))], unit_box(1), _rng(12), budget=20)
    assert not hopeless.feasible


def test_de_stops_early_once_converged():
    solution = de_minimize(
        lambda X: 1.0 + np.sum((X - 0.3) ** 2, axis=1), [], unit_box(1), _rng(13), budget=20000
    )
    assert solution.evaluations < 20000
    assert solution.x[0] == pytest.approx(0.3, abs=5e-3)


def test_de_zero_tolerances_spend_the_whole_budget():
    # 1000 // 20 - 1 = 49 generations after the initial population
    solution = de_minimize(
        lambda X: np.sum((X - 0.3) ** 2, axis=1),
        [],
        unit_box(2),
        _rng(14),
        budget=1000,
        tol=0.0,
        atol=0.0,
    )
    assert solution.evaluations == 1000


def test_de_settings_carry_the_tolerances():
    settings = DESettings.from_config(SolverConfig(de_tol=1e-3, de_atol=0.0))
    assert settings.tol == 1e-3
    assert settings.atol == 0.0
    assert DE.tol == 1e-6


def test_total_violation():
    assert total_violation(np.array([[1.0, -0.5, -0.25], [0.0, 2.0, 3.0]])).tolist() == [0.75, 0.0]


def test_de_settings_defaults():
    assert DE.population_for(1) == 20
    assert DE.population_for(4) == 40
    assert DESettings(population=12).population_for(4) == 12
    assert DE.budget(3) == 9000


# ==================== P2 ====================

def test_p2_centers_the_point_when_surrogates_are_slack():
    solution = solve_p2(None, [lambda Z: np.full(len(Z), 10.0)], GC, unit_box(2), _rng(), DE)
    assert solution.aux == pytest.approx(0.5, abs=5e-2)
    assert solution.x == pytest.approx([0.5, 0.5], abs=5e-2)


def test_p2_balances_surrogate_and_bound_margins():
    # max z s.t. z1 - 0.6 >= z and z1 <= 1 - z  ->  z1 = 0.8, z = 0.2
    solution = solve_p2(None, [lambda Z: Z[:, 0] - 0.6], GC, unit_box(2), _rng(3), DE)
    assert solution.aux == pytest.approx(0.2, abs=5e-2)
    assert solution.x[0] == pytest.approx(0.8, abs=5e-2)


def test_p2_infeasible_returns_none():
    assert solve_p2(None, [lambda Z: -np.ones(len(Z))], GC, unit_box(2), _rng(), DE) is None


def test_p2_respects_the_classification_constraint():
    assert solve_p2(None, [lambda Z: np.ones(len(Z))], constant_gc(-1.0), unit_box(2), _rng(), DE) is None


# ==================== P3 ====================

def test_p3_moves_to_the_farthest_corner():
    archive = _feasible_archive([[0.0, 0.0]])
    solution = solve_p3(archive, [], GC, unit_box(2), _rng(4), DE)
    assert solution.aux == pytest.approx(np.sqrt(2.0), abs=5e-2)
    assert solution.x == pytest.approx([1.0, 1.0], abs=5e-2)


def test_p3_between_two_feasible_points():
    archive = _feasible_archive([[0.0, 0.0], [1.0, 1.0]])
    solution = solve_p3(archive, [], GC, unit_box(2), _rng(5), DE)
    assert solution.aux == pytest.approx(1.0, abs=5e-2)
    corner = min(np.linalg.norm(solution.x - [1.0, 0.0]), np.linalg.norm(solution.x - [0.0, 1.0]))
    assert corner <= 5e-2


def test_p3_distance_is_zero_when_infeasible():
    archive = _feasible_archive([[0.5, 0.5]])
    solution = solve_p3(archive, [lambda Z: -np.ones(len(Z))], GC, unit_box(2), _rng(), DE)
    assert solution.aux == 0.0


def test_p3_needs_a_feasible_point():
    problem = make_problem(lambda x: 0.0, [lambda x: -1.0])
    archive = Archive(problem)
    archive.filter_point(np.array([0.5, 0.5]), evaluate(problem, np.array([0.5, 0.5])))
    with pytest.raises(ContractError):
        solve_p3(archive, [], GC, unit_box(2), _rng(), DE)


# ==================== P4 / P5 ====================

def _bowl(Z):
    return (Z[:, 0] - 0.3) ** 2 + (Z[:, 1] - 0.6) ** 2


def test_p4_multistart_is_sorted_and_distinct():
    found = solve_p4_multistart(_bowl, [], GC, unit_box(2), _rng(6), n_starts=4, de=DE)
    assert found
    assert found[0].x == pytest.approx([0.3, 0.6], abs=1e-3)
    values = [s.aux for s in found]
    assert values == sorted(values)
    for i, a in enumerate(found):
        for b in found[i + 1:]:
            assert np.linalg.norm(a.x - b.x) > 1e-6


def test_p4_respects_surrogate_constraints():
    found = solve_p4_multistart(
        _bowl, [lambda Z: Z[:, 0] - 0.5], GC, unit_box(2), _rng(7), n_starts=2, de=DE
    )
    assert found[0].x == pytest.approx([0.5, 0.6], abs=1e-3)


def test_p4_all_infeasible_is_empty():
    found = solve_p4_multistart(
        _bowl, [lambda Z: -np.ones(len(Z))], GC, unit_box(2), _rng(), n_starts=2, de=DE
    )
    assert found == []


def test_p5_keeps_its_distance_from_feasible_points():
    archive = _feasible_archive([[0.3, 0.6]])
    solution = solve_p5(_bowl, [], GC, unit_box(2), 0.2, archive, _rng(8), DE)
    assert np.linalg.norm(solution.x - [0.3, 0.6]) == pytest.approx(0.2, abs=5e-2)
    assert solution.aux == pytest.approx(0.04, abs=5e-3)


def test_p5_infeasible_returns_none():
    archive = _feasible_archive([[0.5, 0.5]])
    # no point of the unit box is 2 away from the center
    assert solve_p5(_bowl, [], GC, unit_box(2), 2.0, archive, _rng(), DE) is None


def test_p5_needs_positive_delta():
    archive = _feasible_archive([[0.5, 0.5]])
    with pytest.raises(ContractError):
        solve_p5(_bowl, [], GC, unit_box(2), 0.0, archive, _rng(), DE)


def test_p3_from_the_center_reaches_a_corner():
    archive = _feasible_archive([[0.5, 0.5]])
    solution = solve_p3(archive, [], GC, unit_box(2), _rng(15), DE)
    assert solution.aux == pytest.approx(np.sqrt(0.5), abs=5e-2)
    corners = np.array([[0.0, 0.0], [0.0, 1.0], [1.0, 0.0], [1.0, 1.0]])
    assert np.min(np.linalg.norm(corners - solution.x, axis=1)) <= 5e-2


def test_p4_multistart_finds_both_minimizers_of_a_bimodal_surrogate():
    def bimodal(Z):
        return (Z[:, 0] - 0.2) ** 2 * (Z[:, 0] - 0.8) ** 2

    minimizers = []
    for seed in range(4):
        found = solve_p4_multistart(bimodal, [], GC, unit_box(1), _rng(seed), n_starts=8, de=DE)
        assert found
        values = [s.aux for s in found]
        assert values == sorted(values)
        for s in found:
            assert min(abs(s.x[0] - 0.2), abs(s.x[0] - 0.8)) <= 1e-2
        minimizers.extend(s.x[0] for s in found)

    assert any(abs(x - 0.2) <= 1e-2 for x in minimizers)
    assert any(abs(x - 0.8) <= 1e-2 for x in minimizers)
