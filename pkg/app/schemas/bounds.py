"""Bound check schemas."""
from decimal import ROUND_CEILING, ROUND_FLOOR
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, Optional

from pydantic import BaseModel, ConfigDict, field_serializer, model_validator

from app.schemas.interval import IntervalValue, format_endpoint


class BoundClaim(str, Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"
    NON_NEGATIVE = "non-negative"
    IN_BRACKET = "in-bracket"


class BoundKind(str, Enum):
    BERNOULLI = "bernoulli"
    TANGENT = "tangent"
    EULER = "euler"


class BoundCheckResult(BaseModel):
    """Outcome of one certified inequality at one index (or sample point)."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    name: str
    index: Optional[int] = None
    point: Optional[str] = None
    value: IntervalValue
    claim: BoundClaim
    holds: bool
    bracket_lo: Optional[Fraction] = None
    bracket_hi: Optional[Fraction] = None
    reconstructed: bool = False
    details: Optional[Dict[str, Any]] = None

    @model_validator(mode="after")
    def _check(self) -> "BoundCheckResult":
        if self.claim == BoundClaim.IN_BRACKET and (self.bracket_lo is None or self.bracket_hi is None):
            raise ValueError("bracket claims need both bracket endpoints")
        if self.holds and not satisfies(self.value, self.claim, self.bracket_lo, self.bracket_hi):
            raise ValueError("holds=true needs an interval strictly satisfying the claim")
        return self

    @field_serializer("bracket_lo")
    def _serialize_lo(self, v: Optional[Fraction]) -> Optional[str]:
        return None if v is None else format_endpoint(v, ROUND_FLOOR)

    @field_serializer("bracket_hi")
    def _serialize_hi(self, v: Optional[Fraction]) -> Optional[str]:
        return None if v is None else format_endpoint(v, ROUND_CEILING)


def satisfies(
    value: IntervalValue,
    claim: BoundClaim,
    bracket_lo: Optional[Fraction] = None,
    bracket_hi: Optional[Fraction] = None,
) -> bool:
    """True when every point of ``value`` satisfies ``claim``; brackets are open."""
    if claim == BoundClaim.POSITIVE:
        return value.lo > 0
    if claim == BoundClaim.NEGATIVE:
        return value.hi < 0
    if claim == BoundClaim.NON_NEGATIVE:
        return value.lo >= 0
    return bracket_lo < value.lo and value.hi < bracket_hi


def decided(
    value: IntervalValue,
    claim: BoundClaim,
    bracket_lo: Optional[Fraction] = None,
    bracket_hi: Optional[Fraction] = None,
) -> bool:
    """True when ``value`` either satisfies ``claim`` or certainly violates it."""
    if satisfies(value, claim, bracket_lo, bracket_hi):
        return True
    if claim == BoundClaim.POSITIVE:
        return value.hi <= 0
    if claim == BoundClaim.NEGATIVE:
        return value.lo >= 0
    if claim == BoundClaim.NON_NEGATIVE:
        return value.hi < 0
    return value.hi <= bracket_lo or value.lo >= bracket_hi
