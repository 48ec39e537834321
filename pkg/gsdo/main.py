"""FastAPI application serving the solver and the test problem registry."""

import logging
from contextlib import asynccontextmanager
from datetime import datetime, timezone

from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware

from gsdo import __version__
from gsdo.config import get_settings
from gsdo.models import HealthResponse, HistoryResponse, Scenario
from gsdo.routers import problems_router, runs_router
from gsdo.services.history import get_run_history
from gsdo.services.testbed import list_problems

# Configure logging
settings = get_settings()
logging.basicConfig(
    level=getattr(logging, settings.log_level),
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
)
logger = logging.getLogger(__name__)


@asynccontextmanager
async def lifespan(app: FastAPI):
    """Application lifespan manager."""
    # Startup
    logger.info("=" * 50)
    logger.info("  GSDO Solver Server - Starting Up")
    logger.info("=" * 50)
    logger.info(f"Server Port: {settings.gsdo_port}")
    logger.info(f"Registered problems: {len(list_problems(Scenario.SET1))}")
    if settings.max_history_entries > 0:
        logger.info(f"Run history: {settings.history_path} ({settings.max_history_entries} entries)")
    else:
        logger.info("Run history disabled")
    logger.info("=" * 50)

    yield

    # Shutdown
    logger.info("Shutting down GSDO Solver Server...")


app = FastAPI(
    title="GSDO Solver Server",
    description="""
    Surrogate-based global optimizer for expensive black-box problems with
    quantifiable, nonquantifiable and hidden constraints.

    ## Features

    - **Problems**: List the registered test problems under constraint Sets 1-4
    - **Solve**: Run one seeded three-stage solver trial and get its summary
    - **History**: Summaries of the most recent runs
    """,
    version=__version__,
    docs_url="/docs",
    redoc_url="/redoc",
    lifespan=lifespan,
)

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_methods=["*"],
    allow_headers=["*"],
)

app.include_router(problems_router)
app.include_router(runs_router)


@app.middleware("http")
async def log_requests(request, call_next):
    """Log all incoming requests for debugging."""
    logger.debug(f"Incoming request: {request.method} {request.url.path}")
    response = await call_next(request)
    logger.debug(f"Response: {response.status_code}")
    return response


@app.get(
    "/health",
    response_model=HealthResponse,
    summary="Health check",
    description="Check server health and the size of the problem registry.",
    tags=["System"],
)
async def health_check():
    """Health check endpoint."""
    return HealthResponse(
        status="healthy",
        problems_registered=len(list_problems(Scenario.SET1)),
        timestamp=datetime.now(timezone.utc),
    )


@app.get(
    "/history",
    response_model=HistoryResponse,
    summary="Get run history",
    description="Summaries of the most recent solver runs, newest first.",
    tags=["System"],
)
async def get_history(limit: int = 50):
    """
    Get the history of solver runs.

    Requires GSDO_MAX_HISTORY_ENTRIES > 0.

    - **limit**: Maximum number of runs to return
    """
    history = get_run_history()
    runs = history.get_history(limit=limit)

    return HistoryResponse(
        runs=runs,
        total=len(runs),
        max_entries=history.max_entries,
    )


@app.delete(
    "/history",
    summary="Clear run history",
    description="Clear all run history.",
    tags=["System"],
)
async def clear_history():
    """Clear all run history."""
    get_run_history().clear()
    logger.info("Run history cleared")

    return {"message": "Run history cleared successfully"}


@app.get(
    "/",
    summary="Server info",
    description="Get basic server information.",
    tags=["System"],
)
async def root():
    """Get server information."""
    return {
        "name": "GSDO Solver Server",
        "version": __version__,
        "docs_url": "/docs",
        "openapi_url": "/openapi.json",
        "health_url": "/health",
    }


if __name__ == "__main__":
    import uvicorn

    uvicorn.run(
        "gsdo.main:app",
        host=settings.gsdo_host,
        port=settings.gsdo_port,
        reload=settings.debug,
        log_level=settings.log_level.lower(),
    )
