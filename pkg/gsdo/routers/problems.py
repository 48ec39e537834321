"""Test problem registry router."""

from fastapi import APIRouter, HTTPException, Query, status

from gsdo.exceptions import UnknownProblemError
from gsdo.models import ProblemInfo, ProblemListResponse, Scenario
from gsdo.services.testbed import get_problem, problem_metadata

router = APIRouter(tags=["Problems"])


def _parse_scenario(value: str) -> Scenario:
    try:
        return Scenario.parse(value)
    except ValueError as e:
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(e))


@router.get(
    "/problems",
    response_model=ProblemListResponse,
    summary="List test problems",
    description="List the registered problems available under a constraint scenario.",
)
def list_registered_problems(
    scenario: str = Query(default="Set1", description="Scenario: 1-4 or Set1-Set4"),
):
    """
    List registered problems.

    - **scenario**: Set1 lists every problem; Set2-Set4 only those with two or more constraints
    """
    parsed = _parse_scenario(scenario)
    problems = problem_metadata(parsed)
    return ProblemListResponse(scenario=parsed, problems=problems, total=len(problems))


@router.get(
    "/problems/{name}",
    response_model=ProblemInfo,
    summary="Get problem metadata",
    description="Dimension, constraint kinds and known optimum of one problem.",
)
def get_problem_info(
    name: str,
    scenario: str = Query(default="Set1", description="Scenario: 1-4 or Set1-Set4"),
):
    """Get metadata for a single registered problem."""
    parsed = _parse_scenario(scenario)
    try:
        problem = get_problem(name, parsed)
    except UnknownProblemError as e:
        raise HTTPException(status_code=status.HTTP_404_NOT_FOUND, detail=str(e))
    except ValueError as e:
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(e))

    return ProblemInfo(
        name=problem.name,
        dimension=problem.dimension,
        constraints=problem.n_constraints,
        kinds=problem.kinds,
        known_optimum=problem.known_optimum,
        source=problem.source,
    )
