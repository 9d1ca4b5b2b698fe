"""Asymptotic constants and explicit expansion routes."""
from fastapi import APIRouter, Query

from app.core.exceptions import ParameterError
from app.schemas.asymptotics import AsymptoticModel, ExpansionEvaluation
from app.schemas.sequence import SequenceFamily
from app.services.asymptotics_service import get_asymptotics_service
from app.services.sequence_service import make_sequence_id

router = APIRouter()


@router.get("/model", response_model=None)
def get_model(r: str = Query(..., description="exponent vector, e.g. 2,2")) -> AsymptoticModel:
    """Certified (lambda, mu, nu) for S^(r)."""
    id = make_sequence_id(SequenceFamily.S_FAMILY.value, r)
    return get_asymptotics_service().solve_lambda(id.r)


@router.get("/expansions/{family}", response_model=None)
def get_expansion_error(
    family: str,
    n: int = Query(..., ge=1),
    terms: int = Query(1, ge=0),
) -> ExpansionEvaluation:
    try:
        target = SequenceFamily(family)
    except ValueError:
        raise ParameterError(f"unknown family {family!r}")
    return get_asymptotics_service().relative_error(target, n, terms)
