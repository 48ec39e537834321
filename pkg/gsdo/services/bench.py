"""Multi-trial experiments, success counts, medians and the results files."""

import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from itertools import groupby
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from gsdo.config import SolverConfig, get_settings
from gsdo.exceptions import ContractError
from gsdo.models import (
    BenchTrial,
    ExperimentResult,
    ProblemAggregate,
    Scenario,
    TerminationReason,
)
from gsdo.services.stages import solve
from gsdo.services.testbed import get_problem

logger = logging.getLogger(__name__)

RESULT_COLUMNS = [
    "label", "problem", "set", "seed", "n_dim", "budget", "f_star",
    "Ns_flag", "best_f", "evals_used", "termination", "rel_error",
]
TRAJECTORY_COLUMNS = ["label", "problem", "set", "seed", "n_dim", "f_star", "eval", "best_f"]


# ==================== Metrics ====================

def relative_error(f_s: float, f_star: float) -> float:
    """|(f_s - f*) / f*|."""
    if f_star == 0:
        raise ContractError("relative error is undefined for a zero optimum")
    return abs((f_s - f_star) / f_star)


def solved_threshold(
    trajectory: Sequence[Optional[float]],
    f_star: float,
    tau: float,
    f0: Optional[float] = None,
) -> float:
    """
    First 1-based evaluation where f0 - f >= (1 - tau)(f0 - f*), or inf.

    ``trajectory`` is the best feasible value after each evaluation (None
    before the first feasible point); ``f0`` defaults to the first feasible value.
    """
    if not 0 < tau < 1:
        raise ContractError("tau must lie in (0, 1)")
    if f0 is None:
        f0 = next((f for f in trajectory if f is not None), None)
        if f0 is None:
            return math.inf
    target = (1 - tau) * (f0 - f_star)
    for i, f in enumerate(trajectory, start=1):
        if f is not None and f0 - f >= target:
            return i
    return math.inf


# ==================== Trials ====================

def run_trial(
    problem_name: str,
    scenario: Union[Scenario, str, int],
    seed: int,
    config: Optional[SolverConfig] = None,
    label: str = "gsdo",
) -> BenchTrial:
    """One seeded solver run reduced to a BenchTrial row."""
    scenario = Scenario.parse(scenario)
    problem = get_problem(problem_name, scenario)
    record = solve(problem, config, seed=seed, scenario=scenario)
    summary = record.summary()

    f_star = problem.known_optimum
    rel = None
    if summary.feasible and f_star not in (None, 0):
        rel = relative_error(summary.best_f, f_star)

    return BenchTrial(
        label=label,
        problem=problem.name,
        scenario=scenario,
        seed=seed,
        n_dim=problem.dimension,
        budget=record.budget,
        f_star=f_star,
        ns_flag=summary.feasible,
        best_f=summary.best_f,
        evals_used=summary.evaluations,
        termination=summary.termination,
        rel_error=rel,
        trajectory=record.trajectory(),
    )


def _run_job(job: Tuple[str, Scenario, int, Optional[SolverConfig], str]) -> BenchTrial:
    return run_trial(*job)


def _worker_count(workers: Optional[int]) -> int:
    if workers is None:
        workers = get_settings().workers
    if workers == 0:
        workers = os.cpu_count() or 1
    return max(1, workers)


def run_experiment(
    problems: Iterable[str],
    scenario: Union[Scenario, str, int],
    config: Optional[SolverConfig] = None,
    trials: int = 30,
    label: str = "gsdo",
    workers: Optional[int] = None,
) -> ExperimentResult:
    """
    Run seeds 1..trials on every problem. Trials are independent, so they are
    spread over a process pool; rows come back sorted by (problem, seed).
    """
    if trials < 1:
        raise ContractError("trials must be >= 1")
    scenario = Scenario.parse(scenario)
    jobs = [(name, scenario, seed, config, label) for name in problems for seed in range(1, trials + 1)]
    workers = _worker_count(workers)
    logger.info(f"Running {len(jobs)} trials ({label}, {scenario.value}) on {workers} worker(s)")

    if workers == 1:
        rows = []
        for job in jobs:
            rows.append(_run_job(job))
            logger.info(f"Finished {job[0]} seed {job[2]}: best f = {rows[-1].best_f}")
    else:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            rows = list(executor.map(_run_job, jobs))

    rows.sort(key=lambda t: (t.label, t.problem, t.scenario.value, t.seed))
    return ExperimentResult(trials=rows, aggregates=aggregate(rows))


# ==================== Aggregation ====================

def median_trial(trials: Sequence[BenchTrial]) -> Optional[BenchTrial]:
    """Successful trial holding the (lower) median best value; ties go to the lowest seed."""
    successful = sorted(
        (t for t in trials if t.ns_flag and t.best_f is not None),
        key=lambda t: (t.best_f, t.seed),
    )
    if not successful:
        return None
    value = successful[(len(successful) - 1) // 2].best_f
    return min((t for t in successful if t.best_f == value), key=lambda t: t.seed)


def _groups(trials: Sequence[BenchTrial]):
    def key(t: BenchTrial):
        return t.label, t.problem, t.scenario.value

    for (label, problem, scenario), group in groupby(sorted(trials, key=key), key=key):
        yield label, problem, Scenario(scenario), list(group)


def aggregate(trials: Sequence[BenchTrial]) -> List[ProblemAggregate]:
    """N_s plus median/min/max over successful trials only."""
    rows = []
    for label, problem, scenario, group in _groups(trials):
        best = [t.best_f for t in group if t.ns_flag and t.best_f is not None]
        errors = [t.rel_error for t in group if t.ns_flag and t.rel_error is not None]
        rows.append(
            ProblemAggregate(
                label=label,
                problem=problem,
                scenario=scenario,
                trials=len(group),
                n_s=sum(1 for t in group if t.ns_flag),
                median_f=float(np.median(best)) if best else None,
                min_f=min(best) if best else None,
                max_f=max(best) if best else None,
                median_rel_error=float(np.median(errors)) if errors else None,
            )
        )
    return rows


def summarize(result: ExperimentResult) -> pd.DataFrame:
    """Per-(label, problem, set) table: N_s, median / min / max best f, median relative error."""
    aggregates = result.aggregates or aggregate(result.trials)
    return pd.DataFrame(
        [
            {
                "label": a.label,
                "problem": a.problem,
                "set": a.scenario.number,
                "trials": a.trials,
                "Ns": a.n_s,
                "median_f": a.median_f,
                "min_f": a.min_f,
                "max_f": a.max_f,
                "median_rel_error": a.median_rel_error,
            }
            for a in aggregates
        ],
        columns=[
            "label", "problem", "set", "trials", "Ns",
            "median_f", "min_f", "max_f", "median_rel_error",
        ],
    )


def relative_error_profile(
    result: ExperimentResult, thresholds: Optional[Sequence[float]] = None
) -> pd.DataFrame:
    """
    Fraction of (problem x trial) instances per label whose relative error is
    within each threshold (default 1%..10%). Unsuccessful trials never count.
    """
    if thresholds is None:
        thresholds = [r / 100 for r in range(1, 11)]
    frame = pd.DataFrame({"threshold": list(thresholds)})
    labels = sorted({t.label for t in result.trials})
    for label in labels:
        trials = [t for t in result.trials if t.label == label]
        errors = np.array(
            [np.inf if t.rel_error is None or not t.ns_flag else t.rel_error for t in trials]
        )
        frame[label] = [float(np.mean(errors <= r)) for r in thresholds]
    return frame


# ==================== Results Files ====================

def trajectories_path(path: Union[str, Path]) -> Path:
    path = Path(path)
    return path.with_name(f"{path.stem}.trajectories.csv")


def write_results(result: ExperimentResult, path: Union[str, Path]) -> Path:
    """results.csv plus the ``<stem>.trajectories.csv`` sidecar profiles are built from."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)

    rows = [
        {
            "label": t.label,
            "problem": t.problem,
            "set": t.scenario.number,
            "seed": t.seed,
            "n_dim": t.n_dim,
            "budget": t.budget,
            "f_star": t.f_star,
            "Ns_flag": int(t.ns_flag),
            "best_f": t.best_f,
            "evals_used": t.evals_used,
            "termination": t.termination.value,
            "rel_error": t.rel_error,
        }
        for t in result.trials
    ]
    pd.DataFrame(rows, columns=RESULT_COLUMNS).to_csv(path, index=False, na_rep="NA")

    long_rows = [
        {
            "label": t.label,
            "problem": t.problem,
            "set": t.scenario.number,
            "seed": t.seed,
            "n_dim": t.n_dim,
            "f_star": t.f_star,
            "eval": i,
            "best_f": f,
        }
        for t in result.trials
        for i, f in enumerate(t.trajectory, start=1)
    ]
    pd.DataFrame(long_rows, columns=TRAJECTORY_COLUMNS).to_csv(
        trajectories_path(path), index=False, na_rep="NA"
    )
    logger.info(f"Wrote {len(rows)} trials to {path}")
    return path


def _optional(value) -> Optional[float]:
    return None if pd.isna(value) else float(value)


def read_results(paths: Union[str, Path, Sequence[Union[str, Path]]]) -> ExperimentResult:
    """Load one or more results files (with their sidecars) into a single result."""
    if isinstance(paths, (str, Path)):
        paths = [paths]

    trials: List[BenchTrial] = []
    for path in paths:
        path = Path(path)
        frame = pd.read_csv(path, na_values=["NA"], keep_default_na=False)
        sidecar = trajectories_path(path)
        curves = {}
        if sidecar.exists():
            long = pd.read_csv(sidecar, na_values=["NA"], keep_default_na=False)
            for key, group in long.groupby(["label", "problem", "set", "seed"], sort=False):
                curves[key] = [_optional(v) for v in group.sort_values("eval")["best_f"]]
        else:
            logger.warning(f"No trajectory file next to {path}; profiles will be empty")

        for row in frame.itertuples(index=False):
            key = (row.label, row.problem, row.set, row.seed)
            trials.append(
                BenchTrial(
                    label=str(row.label),
                    problem=str(row.problem),
                    scenario=Scenario.parse(int(row.set)),
                    seed=int(row.seed),
                    n_dim=int(row.n_dim),
                    budget=int(row.budget),
                    f_star=_optional(row.f_star),
                    ns_flag=bool(int(row.Ns_flag)),
                    best_f=_optional(row.best_f),
                    evals_used=int(row.evals_used),
                    termination=TerminationReason(row.termination),
                    rel_error=_optional(row.rel_error),
                    trajectory=curves.get(key, []),
                )
            )

    trials.sort(key=lambda t: (t.label, t.problem, t.scenario.value, t.seed))
    return ExperimentResult(trials=trials, aggregates=aggregate(trials))
