"""Solver, test bed and benchmark services."""

from gsdo.services.archive import Archive
from gsdo.services.history import RunHistory
from gsdo.services.problem import BudgetedEvaluator, ConstraintDef, ProblemSpec
from gsdo.services.stages import run, solve

__all__ = [
    "Archive",
    "BudgetedEvaluator",
    "ConstraintDef",
    "ProblemSpec",
    "RunHistory",
    "run",
    "solve",
]
