"""Solver run router."""

import logging

from fastapi import APIRouter, HTTPException, status

from gsdo.config import load_solver_config
from gsdo.exceptions import ConfigError, ContractError, ScenarioError, UnknownProblemError
from gsdo.models import SolveRequest, SolveResponse
from gsdo.services.history import get_run_history
from gsdo.services.stages import solve
from gsdo.services.testbed import get_problem

logger = logging.getLogger(__name__)

router = APIRouter(tags=["Runs"])


@router.post(
    "/solve",
    response_model=SolveResponse,
    summary="Run the solver",
    description="Run one seeded solver trial on a registered problem and return its summary.",
)
def solve_problem(request: SolveRequest):
    """
    Run the three-stage solver once.

    - **problem**: Registered problem name
    - **scenario**: Constraint scenario (Set1-Set4)
    - **budget**: Expensive evaluation budget, defaults to the scenario budget
    - **seed**: Random seed
    - **config**: Flat SolverConfig overrides, e.g. {"c_g": 0.3}
    - **include_log**: Also return the per-evaluation log
    """
    try:
        problem = get_problem(request.problem, request.scenario)
        config = load_solver_config(**{**request.config, "t_max": request.budget})
        record = solve(problem, config, seed=request.seed, scenario=request.scenario)
    except HTTPException:
        raise
    except UnknownProblemError as e:
        raise HTTPException(status_code=status.HTTP_404_NOT_FOUND, detail=str(e))
    except (ConfigError, ScenarioError, ContractError) as e:
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(e))
    except Exception as e:
        raise HTTPException(
            status_code=status.HTTP_500_INTERNAL_SERVER_ERROR,
            detail=f"Solver run failed: {str(e)}",
        )

    summary = record.summary()
    run_id = get_run_history().record(summary)
    logger.info(f"Run {run_id or '-'}: {summary.problem} best f = {summary.best_f}")

    return SolveResponse(
        run_id=run_id or None,
        summary=summary,
        log=record.log if request.include_log else None,
    )
