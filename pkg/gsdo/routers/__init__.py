"""API route handlers."""

from gsdo.routers.problems import router as problems_router
from gsdo.routers.runs import router as runs_router

__all__ = ["problems_router", "runs_router"]
