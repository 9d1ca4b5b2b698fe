"""Sequence generation routes."""
from typing import Optional
from fastapi import APIRouter, Query

from app.schemas.sequence import SequenceWindow
from app.services.sequence_service import get_sequence_service, make_sequence_id

router = APIRouter()


@router.get("/{family}/window", response_model=SequenceWindow)
def get_window(
    family: str,
    start: Optional[int] = Query(None, ge=0),
    count: int = Query(10, ge=1, le=1000),
    r: Optional[str] = Query(None, description="exponent vector for sfam, e.g. 2,2"),
):
    """Exact terms a_start .. a_(start+count-1)."""
    id = make_sequence_id(family, r)
    first = id.family.first_index if start is None else start
    return get_sequence_service().window(id, first, count)
