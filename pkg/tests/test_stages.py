"""Tests for the three solver stages and the run entry point."""

import numpy as np
import pytest

from gsdo.config import SolverConfig
from gsdo.exceptions import ConfigError
from gsdo.models import PointClass, PointSource, Stage, TerminationReason
from gsdo.services import stages
from gsdo.services.stages import RunContext, run, solve, stage2_spread
from gsdo.services.subproblems import SubproblemSolution
from gsdo.services.testbed import get_problem
from tests.conftest import make_problem


def _context(problem, config, seed=0):
    config = config.resolve(problem.dimension)
    return RunContext.create(problem, config, np.random.default_rng(seed), seed=seed)


def _assert_monotone(record):
    trajectory = [f for f in record.trajectory() if f is not None]
    assert all(b <= a for a, b in zip(trajectory, trajectory[1:]))


def test_feasible_first_batch_ends_stage_one(feasible_problem, fast_config):
    config = fast_config.model_copy(update={"t_max": 12})
    record = solve(feasible_problem, config, seed=1)
    assert record.stage_boundaries[Stage.SPREAD.value] == 6  # T_LH = 2(d+1)
    assert all(entry.source == PointSource.LHS for entry in record.log[:6])
    assert len(record.log) <= 12


def test_infeasible_problem_spends_the_whole_budget(infeasible_problem, fast_config):
    config = fast_config.model_copy(update={"t_max": 15})
    record = solve(infeasible_problem, config, seed=2)
    assert record.termination == TerminationReason.NO_FEASIBLE_FOUND
    assert len(record.log) == 15
    assert Stage.GLOBAL.value not in record.stage_boundaries
    assert record.summary().best_f is None


def test_stage_two_does_nothing_when_enough_feasible_points(feasible_problem, fast_config):
    ctx = _context(feasible_problem, fast_config.model_copy(update={"eta_max": 1}))
    stages._evaluate_and_filter(ctx, np.array([0.2, 0.2]), PointSource.LHS)
    stage2_spread(ctx)
    assert ctx.evaluator.count == 1


def test_stage_two_adds_distinct_feasible_points(feasible_problem, fast_config):
    ctx = _context(feasible_problem, fast_config.model_copy(update={"eta_max": 3}))
    stages._evaluate_and_filter(ctx, np.array([0.2, 0.2]), PointSource.LHS)
    stage2_spread(ctx)
    assert ctx.evaluator.count == 3
    assert ctx.archive.size(PointClass.F) == 3
    X = ctx.archive.X
    distances = [np.linalg.norm(X[i] - X[j]) for i in range(3) for j in range(i + 1, 3)]
    assert min(distances) > 0


def test_stage_two_falls_back_to_ball_points(feasible_problem, fast_config, monkeypatch):
    def failing_p3(archive, surrogates, gc, bounds, rng, de):
        return SubproblemSolution(x=np.zeros(2), aux=0.0, feasible=False, constraint_violation=1.0)

    monkeypatch.setattr(stages, "solve_p3", failing_p3)
    ctx = _context(feasible_problem, fast_config.model_copy(update={"eta_max": 8}))
    for x in ([0.1, 0.1], [0.9, 0.2], [0.4, 0.8]):
        stages._evaluate_and_filter(ctx, np.array(x), PointSource.LHS)
    stage2_spread(ctx)
    spread = [e for e in ctx.record.log if e.stage == Stage.SPREAD]
    assert spread
    assert all(e.source == PointSource.BALL for e in spread)


def test_huge_delta_min_terminates_on_first_exploration(feasible_problem, fast_config):
    config = fast_config.model_copy(update={"t_max": 30, "delta_min": 1e9})
    record = solve(feasible_problem, config, seed=3)
    assert record.termination == TerminationReason.DELTA_BELOW_MIN
    assert len(record.log) == record.stage_boundaries[Stage.GLOBAL.value]
    assert len(record.log) < 30


def test_zero_exploitation_probability_never_exploits(sphere_problem, fast_config):
    config = fast_config.model_copy(update={"t_max": 18, "c_g": 0.0})
    record = solve(sphere_problem, config, seed=4)
    global_entries = [e for e in record.log if e.stage == Stage.GLOBAL]
    assert global_entries
    assert all(e.source != PointSource.P4 for e in global_entries)


def test_full_run_respects_budget_and_improves(sphere_problem, fast_config):
    config = fast_config.model_copy(update={"t_max": 20, "c_g": 1.0, "k_global": 0})
    record = solve(sphere_problem, config, seed=5)
    summary = record.summary()
    assert summary.evaluations <= 20
    assert summary.termination in (
        TerminationReason.BUDGET_EXHAUSTED,
        TerminationReason.DELTA_BELOW_MIN,
    )
    assert summary.feasible
    _assert_monotone(record)
    assert any(e.source == PointSource.P4 for e in record.log)


def test_same_seed_gives_identical_records(sphere_problem, fast_config):
    config = fast_config.model_copy(update={"t_max": 15})
    first = solve(sphere_problem, config, seed=6)
    second = solve(sphere_problem, config, seed=6)
    assert first.model_dump() == second.model_dump()


def test_no_stage_three_before_a_feasible_point(sphere_problem, fast_config):
    record = solve(sphere_problem, fast_config.model_copy(update={"t_max": 15}), seed=7)
    first_feasible = next(
        i for i, e in enumerate(record.log) if e.point_class == PointClass.F
    )
    assert record.stage_boundaries[Stage.GLOBAL.value] > first_feasible


def test_hidden_points_are_never_surrogate_centers(nusk_problem, fast_config):
    ctx = run(nusk_problem, fast_config.model_copy(update={"t_max": 18}), seed=8)
    hidden = set(ctx.archive.indices(PointClass.H).tolist())
    assert ctx.record.surrogate_fits
    for fit in ctx.record.surrogate_fits:
        assert hidden.isdisjoint(fit.centers)


def _random_config(rng, t_max_high=16, de_budget_per_dim=150):
    t_max = int(rng.integers(3, t_max_high))
    return SolverConfig(
        t_max=t_max,
        t_lh=int(rng.integers(3, t_max + 1)),
        eta_max=int(rng.integers(1, 5)),
        k_global=int(rng.integers(0, 4)),
        c_g=float(rng.random()),
        de_budget_per_dim=de_budget_per_dim,
        p4_starts=1,
    )


def _assert_run_invariants(ctx, t_max):
    assert ctx.evaluator.count <= t_max
    assert len(ctx.record.log) == ctx.evaluator.count
    assert len(ctx.archive) == ctx.evaluator.count
    assert sum(ctx.archive.counts().values()) == len(ctx.archive)
    hidden = set(ctx.archive.indices(PointClass.H).tolist())
    for fit in ctx.record.surrogate_fits:
        assert hidden.isdisjoint(fit.centers)
    _assert_monotone(ctx.record)


def test_randomized_configs_never_exceed_the_budget(sphere_problem, nusk_problem):
    rng = np.random.default_rng(2024)
    for trial in range(8):
        problem = sphere_problem if trial % 2 == 0 else nusk_problem
        config = _random_config(rng)
        _assert_run_invariants(run(problem, config, seed=trial), config.t_max)


@pytest.mark.slow
def test_thousand_randomized_configs_keep_run_invariants(sphere_problem, nusk_problem):
    rng = np.random.default_rng(7)
    for trial in range(1000):
        problem = sphere_problem if trial % 2 == 0 else nusk_problem
        # 40 * 2 covers the 30 member population of the augmented subproblems
        config = _random_config(rng, t_max_high=12, de_budget_per_dim=40)
        _assert_run_invariants(run(problem, config, seed=trial), config.t_max)


def test_p4_is_only_solved_when_exploitation_is_allowed(sphere_problem, fast_config, monkeypatch):
    calls = []
    real_p4 = stages.solve_p4_multistart

    def counting_p4(*args, **kwargs):
        calls.append(1)
        return real_p4(*args, **kwargs)

    monkeypatch.setattr(stages, "solve_p4_multistart", counting_p4)
    solve(sphere_problem, fast_config.model_copy(update={"t_max": 18, "c_g": 0.0}), seed=4)
    assert calls == []

    exploit = fast_config.model_copy(update={"t_max": 20, "c_g": 1.0, "k_global": 0})
    solve(sphere_problem, exploit, seed=5)
    assert calls


def test_stage_three_uses_ball_points_without_objective_centers(
    feasible_problem, fast_config, monkeypatch
):
    def no_fit(*args, **kwargs):
        raise AssertionError("objective surrogate should not be fitted")

    monkeypatch.setattr(stages, "objective_rank_ready", lambda archive: False)
    monkeypatch.setattr(stages, "fit_objective_surrogate", no_fit)
    ctx = _context(feasible_problem, fast_config.model_copy(update={"t_max": 4, "t_lh": 3}))
    stages._evaluate_and_filter(ctx, np.array([0.2, 0.2]), PointSource.LHS)

    assert stages.stage3_global(ctx) == TerminationReason.BUDGET_EXHAUSTED
    global_entries = [e for e in ctx.record.log if e.stage == Stage.GLOBAL]
    assert len(global_entries) == 3
    assert all(e.source == PointSource.BALL for e in global_entries)


def test_zero_exploration_distance_resets_to_the_unit_box_width(fast_config, monkeypatch):
    problem = make_problem(
        lambda x: float(np.sum(x)), [lambda x: 1.0], upper=(0.5, 0.5), name="half-box"
    )
    deltas = []

    def stuck_p3(archive, surrogates, gc, bounds, rng, de):
        return SubproblemSolution(x=np.zeros(2), aux=0.0, feasible=False, constraint_violation=1.0)

    def recording_p5(objective, surrogates, gc, bounds, delta, archive, rng, de):
        deltas.append(delta)
        return None

    monkeypatch.setattr(stages, "solve_p3", stuck_p3)
    monkeypatch.setattr(stages, "solve_p5", recording_p5)
    ctx = _context(problem, fast_config.model_copy(update={"t_max": 4, "t_lh": 3, "c_g": 0.0}))
    for x in ([0.05, 0.05], [0.45, 0.05], [0.05, 0.45]):
        stages._evaluate_and_filter(ctx, np.array(x), PointSource.LHS)

    stages.stage3_global(ctx)
    assert problem.delta_lu == pytest.approx(0.5)
    assert deltas == [1.0]
    assert ctx.record.log[-1].source == PointSource.BALL


def test_budget_defaults_to_the_scenario_budget(fast_config):
    config = fast_config.model_copy(update={"delta_min": 1e9})
    record = solve(get_problem("G24"), config, seed=0)
    assert record.budget == 45
    record = solve(get_problem("G24", "Set2"), config, seed=0, scenario="Set2")
    assert record.budget == 90


def test_invalid_config_is_rejected(sphere_problem):
    with pytest.raises(ConfigError):
        solve(sphere_problem, SolverConfig(t_max=2))
    with pytest.raises(ConfigError):
        solve(sphere_problem, SolverConfig(c_g=1.5))
