"""Performance and data profiles over the median trial of each (solver, problem)."""

import logging
import math
from pathlib import Path
from typing import Dict, Optional, Sequence, Union

import numpy as np
import pandas as pd
from matplotlib.figure import Figure

from gsdo.models import ExperimentResult, ProfileKind, ProfileTable
from gsdo.services.bench import median_trial, solved_threshold

logger = logging.getLogger(__name__)

GRID_POINTS = 64
ALPHA_MAX = 32.0


def alpha_grid(points: int = GRID_POINTS, alpha_max: float = ALPHA_MAX) -> np.ndarray:
    return np.geomspace(1.0, alpha_max, points)


def beta_grid(beta_max: float, points: int = GRID_POINTS) -> np.ndarray:
    return np.linspace(0.0, beta_max, points)


def evaluations_to_solve(result: ExperimentResult, tau: float) -> pd.DataFrame:
    """
    w_{s,p}: one row per problem (name/set), one column per label. Each entry
    is the solved threshold of the median trial, inf when unsolved or when no
    trial was feasible.
    """
    labels = sorted({t.label for t in result.trials})
    problems = sorted({(t.problem, t.scenario.number) for t in result.trials})
    w = pd.DataFrame(
        math.inf,
        index=pd.Index([f"{p}/Set{s}" for p, s in problems], name="problem"),
        columns=labels,
    )
    for label in labels:
        for problem, number in problems:
            group = [
                t for t in result.trials
                if t.label == label and t.problem == problem and t.scenario.number == number
            ]
            trial = median_trial(group)
            if trial is None or trial.f_star is None:
                continue
            w.loc[f"{problem}/Set{number}", label] = solved_threshold(
                trial.trajectory, trial.f_star, tau
            )
    return w


def _dimensions(result: ExperimentResult) -> pd.Series:
    dims = {f"{t.problem}/Set{t.scenario.number}": t.n_dim for t in result.trials}
    return pd.Series(dims, name="n_dim")


def performance_curves(w: pd.DataFrame, grid: Sequence[float]) -> Dict[str, list]:
    """rho_s(alpha): share of problems with w_sp / min_s w_sp <= alpha."""
    best = w.min(axis=1)
    with np.errstate(invalid="ignore", divide="ignore"):
        ratios = w.div(best, axis=0)
    # inf / inf on problems nobody solved
    ratios = ratios.fillna(math.inf)
    n_problems = len(w.index)
    return {
        label: [float((ratios[label] <= a).sum() / n_problems) for a in grid]
        for label in w.columns
    }


def data_curves(w: pd.DataFrame, n_dim: pd.Series, grid: Sequence[float]) -> Dict[str, list]:
    """d_s(beta): share of problems with w_sp / (n_p + 1) <= beta."""
    scaled = w.div(n_dim.reindex(w.index) + 1, axis=0)
    n_problems = len(w.index)
    return {
        label: [float((scaled[label] <= b).sum() / n_problems) for b in grid]
        for label in w.columns
    }


def performance_profile(
    result: ExperimentResult, tau: float, grid: Optional[Sequence[float]] = None
) -> ProfileTable:
    grid = alpha_grid() if grid is None else np.asarray(grid, dtype=float)
    w = evaluations_to_solve(result, tau)
    return ProfileTable(
        kind=ProfileKind.PERF,
        tau=tau,
        grid=[float(a) for a in grid],
        curves=performance_curves(w, grid),
    )


def data_profile(
    result: ExperimentResult, tau: float, grid: Optional[Sequence[float]] = None
) -> ProfileTable:
    if grid is None:
        beta_max = max((t.budget / (t.n_dim + 1) for t in result.trials), default=0.0)
        grid = beta_grid(beta_max)
    grid = np.asarray(grid, dtype=float)
    w = evaluations_to_solve(result, tau)
    return ProfileTable(
        kind=ProfileKind.DATA,
        tau=tau,
        grid=[float(b) for b in grid],
        curves=data_curves(w, _dimensions(result), grid),
    )


def build_profile(
    result: ExperimentResult, tau: float, kind: Union[ProfileKind, str]
) -> ProfileTable:
    if ProfileKind(kind) == ProfileKind.PERF:
        return performance_profile(result, tau)
    return data_profile(result, tau)


# ==================== Output ====================

def profile_to_frame(table: ProfileTable) -> pd.DataFrame:
    column = "alpha" if table.kind == ProfileKind.PERF else "beta"
    frame = pd.DataFrame({column: table.grid})
    for label, curve in table.curves.items():
        frame[label] = curve
    return frame


def profile_summary(table: ProfileTable) -> pd.DataFrame:
    """Value at the first grid point (rho(1) for performance profiles) and at the last."""
    return pd.DataFrame(
        [
            {"label": label, "initial": curve[0] if curve else None, "final": curve[-1] if curve else None}
            for label, curve in table.curves.items()
        ],
        columns=["label", "initial", "final"],
    )


def write_profile(table: ProfileTable, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    profile_to_frame(table).to_csv(path, index=False)
    logger.info(f"Wrote {table.kind.value} profile to {path}")
    return path


def plot_profile(table: ProfileTable, path: Union[str, Path]) -> Path:
    """Static step plot, one curve per label."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig = Figure(figsize=(6, 4))
    ax = fig.subplots()
    for label, curve in table.curves.items():
        ax.step(table.grid, curve, where="post", label=label)
    if table.kind == ProfileKind.PERF:
        ax.set_xscale("log", base=2)
        ax.set_xlabel("performance ratio alpha")
        ax.set_ylabel("rho(alpha)")
    else:
        ax.set_xlabel("simplex gradients beta")
        ax.set_ylabel("d(beta)")
    ax.set_ylim(-0.02, 1.02)
    ax.set_title(f"{table.kind.value} profile, tau = {table.tau:g}")
    ax.legend(loc="lower right")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, format="svg")
    return path
