"""The three-stage solver: find a feasible point, spread feasible points, then
alternate exploration and exploitation until the budget is spent."""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Tuple, Union

import numpy as np

from gsdo.config import SolverConfig, default_budget
from gsdo.exceptions import FitError, RankError
from gsdo.models import (
    GcParams,
    LogEntry,
    PointClass,
    PointSource,
    Scenario,
    Stage,
    SurrogateFit,
    TerminationReason,
    TrialRecord,
)
from gsdo.services.archive import Archive
from gsdo.services.classifier import ClassificationConstraint
from gsdo.services.problem import BudgetedEvaluator, ProblemSpec
from gsdo.services.rbf import (
    RbfModel,
    fit_constraint_surrogates,
    fit_objective_surrogate,
    objective_rank_ready,
    rank_ready,
)
from gsdo.services.sampling import latin_hypercube, random_ball_point
from gsdo.services.subproblems import (
    DESettings,
    solve_p2,
    solve_p3,
    solve_p4_multistart,
    solve_p5,
    unit_box,
)

logger = logging.getLogger(__name__)


class FeasibilityStatus(str, Enum):
    FOUND_FEASIBLE = "FoundFeasible"
    FAILED = "Failed"


@dataclass
class RunContext:
    """Mutable state of one solver run."""

    problem: ProblemSpec
    config: SolverConfig
    rng: np.random.Generator
    evaluator: BudgetedEvaluator
    archive: Archive
    record: TrialRecord
    de: DESettings
    gc_params: GcParams
    stage: Stage = Stage.FIND_FEASIBLE
    center_cap: Optional[int] = None
    box: Optional[np.ndarray] = None

    @classmethod
    def create(
        cls,
        problem: ProblemSpec,
        config: SolverConfig,
        rng: np.random.Generator,
        scenario: Scenario = Scenario.SET1,
        seed: int = 0,
    ) -> "RunContext":
        """``config`` must already be resolved for the problem dimension."""
        d = problem.dimension
        return cls(
            problem=problem,
            config=config,
            rng=rng,
            evaluator=BudgetedEvaluator(problem, config.t_max, config.feasibility_tol),
            archive=Archive(problem, feasibility_tol=config.feasibility_tol),
            record=TrialRecord(
                problem=problem.name, scenario=scenario, seed=seed, budget=config.t_max
            ),
            de=DESettings.from_config(config),
            gc_params=config.gc_params,
            center_cap=config.center_cap_per_dim * (d + 1),
            box=unit_box(d),
        )

    def enter(self, stage: Stage):
        self.stage = stage
        self.record.stage_boundaries[stage.value] = self.evaluator.count
        logger.info(
            f"{self.problem.name}: entering {stage.value} after {self.evaluator.count} evaluations "
            f"(|F|={self.archive.size(PointClass.F)})"
        )


# ==================== Helpers ====================

def _evaluate_and_filter(ctx: RunContext, x: np.ndarray, source: PointSource) -> PointClass:
    """Spend one expensive evaluation on raw ``x``, archive it and log it."""
    outcome = ctx.evaluator.evaluate(x)
    point_class = ctx.archive.filter_point(x, outcome)
    best = ctx.archive.best_feasible()
    ctx.record.log.append(
        LogEntry(
            index=len(ctx.archive) - 1,
            x=np.asarray(x, dtype=float).tolist(),
            point_class=point_class,
            objective=outcome.objective,
            best_feasible=None if best is None else best[1],
            stage=ctx.stage,
            source=source,
        )
    )
    return point_class


def _admissible(ctx: RunContext, z: Optional[np.ndarray]) -> Optional[np.ndarray]:
    """Raw point for normalized ``z``, or None if it is already archived."""
    if z is None:
        return None
    problem = ctx.problem
    x = np.clip(problem.denormalize(z), problem.lower_array, problem.upper_array)
    if ctx.archive.contains(x):
        return None
    return x


def _log_fit(ctx: RunContext, target: str, model: RbfModel):
    centers = [] if model.center_indices is None else [int(i) for i in model.center_indices]
    ctx.record.surrogate_fits.append(
        SurrogateFit(evaluations=ctx.evaluator.count, target=target, centers=centers)
    )
    logger.debug(f"Fitted {target} surrogate on centers {centers}")


def _fit_constraints(ctx: RunContext) -> List[RbfModel]:
    models = fit_constraint_surrogates(ctx.archive, ctx.center_cap)
    for j, model in models.items():
        _log_fit(ctx, f"g{j + 1}", model)
    return [models[j] for j in sorted(models)]


def _fit_objective(ctx: RunContext) -> RbfModel:
    model = fit_objective_surrogate(ctx.archive, ctx.center_cap)
    _log_fit(ctx, "objective", model)
    return model


def _gc(ctx: RunContext) -> ClassificationConstraint:
    return ClassificationConstraint(ctx.archive, ctx.gc_params)


def _ball_point(ctx: RunContext) -> np.ndarray:
    return random_ball_point(ctx.archive, ctx.config.delta_r, ctx.config.delta_d, ctx.rng)


def _evaluate_design(ctx: RunContext, n: int, stop_on_feasible: bool) -> bool:
    """Evaluate a fresh LHS design of ``n`` points. True once a feasible point is found."""
    problem = ctx.problem
    found = False
    for x in latin_hypercube(problem.lower_array, problem.upper_array, n, ctx.rng):
        if ctx.evaluator.exhausted:
            break
        if ctx.archive.contains(x):
            continue
        if _evaluate_and_filter(ctx, x, PointSource.LHS) == PointClass.F:
            found = True
            if stop_on_feasible:
                break
    return found


# ==================== Stages ====================

def stage1_find_feasible(ctx: RunContext) -> FeasibilityStatus:
    """Initial designs until the surrogates are fittable, then P2 with LHS fallback."""
    ctx.enter(Stage.FIND_FEASIBLE)
    archive, evaluator = ctx.archive, ctx.evaluator
    d = ctx.problem.dimension

    while not evaluator.exhausted:
        n = min(ctx.config.t_lh, evaluator.remaining)
        if _evaluate_design(ctx, n, stop_on_feasible=False):
            return FeasibilityStatus.FOUND_FEASIBLE
        if rank_ready(archive):
            break

    while not evaluator.exhausted:
        solution = None
        try:
            surrogates = _fit_constraints(ctx)
            solution = solve_p2(archive, surrogates, _gc(ctx), ctx.box, ctx.rng, ctx.de)
        except (RankError, FitError) as e:
            logger.warning(f"Constraint surrogates unavailable in stage 1: {e}")

        x = _admissible(ctx, None if solution is None else solution.x)
        if x is not None:
            if _evaluate_and_filter(ctx, x, PointSource.P2) == PointClass.F:
                return FeasibilityStatus.FOUND_FEASIBLE
            continue

        logger.warning("P2 returned no new point; evaluating fresh LHS points")
        if _evaluate_design(ctx, min(d + 1, evaluator.remaining), stop_on_feasible=True):
            return FeasibilityStatus.FOUND_FEASIBLE

    if archive.size(PointClass.F) > 0:
        return FeasibilityStatus.FOUND_FEASIBLE
    return FeasibilityStatus.FAILED


def stage2_spread(ctx: RunContext):
    """Add feasible points far from the known ones until |X_F| reaches eta_max."""
    ctx.enter(Stage.SPREAD)
    archive, evaluator, config = ctx.archive, ctx.evaluator, ctx.config
    iterations = 0

    while (
        archive.size(PointClass.F) < config.eta_max
        and not evaluator.exhausted
        and iterations < config.k_max
    ):
        iterations += 1
        z = None
        try:
            surrogates = _fit_constraints(ctx)
            result = solve_p3(archive, surrogates, _gc(ctx), ctx.box, ctx.rng, ctx.de)
            if result.aux > 0:
                z = result.x
        except (RankError, FitError) as e:
            logger.warning(f"Constraint surrogates unavailable in stage 2: {e}")

        x, source = _admissible(ctx, z), PointSource.P3
        if x is None:
            logger.warning("P3 returned no new point; using a random ball point")
            x, source = _ball_point(ctx), PointSource.BALL
        _evaluate_and_filter(ctx, x, source)

    logger.info(f"Stage 2 finished after {iterations} iterations with |F|={archive.size(PointClass.F)}")


def _exploration_point(
    ctx: RunContext, objective: RbfModel, surrogates: List[RbfModel], gc
) -> Tuple[Optional[np.ndarray], PointSource, bool]:
    """P3 for the distance, then P5. The flag is True when delta fell below delta_min."""
    result = solve_p3(ctx.archive, surrogates, gc, ctx.box, ctx.rng, ctx.de)
    delta = result.aux
    if delta == 0:
        # min(delta_lu, 1) measured in normalized coordinates, where delta_lu is 1
        delta = min(float(np.min(ctx.box[:, 1] - ctx.box[:, 0])), 1.0)
    if delta < ctx.config.delta_min:
        return None, PointSource.P5, True

    solution = solve_p5(objective, surrogates, gc, ctx.box, delta, ctx.archive, ctx.rng, ctx.de)
    x = _admissible(ctx, None if solution is None else solution.x)
    if x is None:
        logger.warning(f"P5 infeasible at delta={delta:.3e}; using a random ball point")
        return _ball_point(ctx), PointSource.BALL, False
    return x, PointSource.P5, False


def _exploitation_point(
    ctx: RunContext, objective: RbfModel, surrogates: List[RbfModel], gc
) -> Optional[np.ndarray]:
    """First P4 minimizer not yet archived, or None."""
    x_opt = solve_p4_multistart(
        objective, surrogates, gc, ctx.box, ctx.rng, n_starts=ctx.config.p4_starts, de=ctx.de
    )
    return next((x for x in (_admissible(ctx, s.x) for s in x_opt) if x is not None), None)


def stage3_global(ctx: RunContext) -> TerminationReason:
    """
    Alternate exploitation (P4) and exploration (P3 + P5), one evaluation per
    iteration. P4 is only solved on iterations where the k > K_Global and
    t < C_g gate is open; an empty or fully archived X_opt falls back to exploration.
    """
    ctx.enter(Stage.GLOBAL)
    evaluator, config = ctx.evaluator, ctx.config
    k = 0

    while not evaluator.exhausted:
        if not objective_rank_ready(ctx.archive):
            logger.warning("Objective centers are rank deficient; using a random ball point")
            _evaluate_and_filter(ctx, _ball_point(ctx), PointSource.BALL)
            k += 1
            continue
        try:
            objective = _fit_objective(ctx)
            surrogates = _fit_constraints(ctx)
        except (RankError, FitError) as e:
            logger.warning(f"Surrogates unavailable in stage 3: {e}; using a random ball point")
            _evaluate_and_filter(ctx, _ball_point(ctx), PointSource.BALL)
            k += 1
            continue

        gc = _gc(ctx)
        t = ctx.rng.random()
        candidate = None
        if k > config.k_global and t < config.c_g:
            candidate = _exploitation_point(ctx, objective, surrogates, gc)

        if candidate is not None:
            x, source = candidate, PointSource.P4
        else:
            x, source, stop = _exploration_point(ctx, objective, surrogates, gc)
            if stop:
                logger.info(f"Exploration distance below {config.delta_min:g}; terminating")
                return TerminationReason.DELTA_BELOW_MIN

        _evaluate_and_filter(ctx, x, source)
        k += 1

    return TerminationReason.BUDGET_EXHAUSTED


# ==================== Entry Point ====================

def run(
    problem: ProblemSpec,
    config: Optional[SolverConfig] = None,
    rng: Optional[np.random.Generator] = None,
    seed: Optional[int] = None,
    scenario: Union[Scenario, str, int] = Scenario.SET1,
) -> RunContext:
    """
    Run all three stages on ``problem`` and return the finished run state.

    The budget defaults to the scenario budget when ``config.t_max`` is unset.
    ``seed`` (or ``config.seed``) seeds a fresh generator unless ``rng`` is given.
    """
    scenario = Scenario.parse(scenario)
    config = config or SolverConfig()
    d = problem.dimension
    if config.t_max is None:
        config = config.model_copy(update={"t_max": default_budget(d, scenario)})
    config = config.resolve(d)
    seed = config.seed if seed is None else seed
    rng = rng if rng is not None else np.random.default_rng(seed)

    ctx = RunContext.create(problem, config, rng, scenario=scenario, seed=seed)
    logger.info(f"Solving {problem.name} ({scenario.value}, d={d}, budget={config.t_max}, seed={seed})")

    if stage1_find_feasible(ctx) == FeasibilityStatus.FAILED:
        ctx.record.termination = TerminationReason.NO_FEASIBLE_FOUND
    else:
        stage2_spread(ctx)
        ctx.record.termination = stage3_global(ctx)

    summary = ctx.record.summary()
    logger.info(
        f"{problem.name}: {summary.termination.value} after {summary.evaluations} evaluations, "
        f"best f = {summary.best_f}"
    )
    return ctx


def solve(
    problem: ProblemSpec,
    config: Optional[SolverConfig] = None,
    rng: Optional[np.random.Generator] = None,
    seed: Optional[int] = None,
    scenario: Union[Scenario, str, int] = Scenario.SET1,
) -> TrialRecord:
    """Run all three stages on ``problem`` and return the trial record."""
    return run(problem, config, rng=rng, seed=seed, scenario=scenario).record
