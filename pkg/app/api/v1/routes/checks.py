"""Monotonicity certificate routes."""
from fastapi import APIRouter

from app.schemas.certificate import Certificate, CheckRequest
from app.services.comparator_service import get_comparator_service
from app.services.sequence_service import make_sequence_id

router = APIRouter()


@router.post("", response_model=Certificate)
def create_check(request: CheckRequest):
    """Certify a root or ratio monotonicity claim over [n_lo, n_hi]."""
    id = make_sequence_id(request.family, request.r)
    return get_comparator_service().check(id, request.claim, request.n_lo, request.n_hi)
