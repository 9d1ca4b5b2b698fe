"""Explicit bound routes."""
from fastapi import APIRouter, Query

from app.core.exceptions import ParameterError
from app.schemas.bounds import BoundCheckResult, BoundKind
from app.services.bounds_service import BOUND_NAMES, get_bounds_service

router = APIRouter()


@router.get("/{which}", response_model=None)
def get_bound(
    which: str,
    n: int = Query(..., ge=1),
    kind: BoundKind = Query(BoundKind.BERNOULLI),
) -> BoundCheckResult:
    """One certified point of a bound grid."""
    if which not in BOUND_NAMES:
        raise ParameterError(f"unknown bound {which!r}; expected one of {', '.join(BOUND_NAMES)}")
    return get_bounds_service().check_grid(which, n, n, kind)[0]
