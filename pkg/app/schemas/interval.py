"""Certified interval schema."""
from decimal import Context, Decimal, ROUND_CEILING, ROUND_FLOOR
from fractions import Fraction
from typing import Optional, Union

from pydantic import BaseModel, ConfigDict, Field, field_serializer, field_validator, model_validator

SIGNIFICANT_DIGITS = 20


def format_endpoint(value: Fraction, rounding: str = ROUND_FLOOR, digits: int = SIGNIFICANT_DIGITS) -> str:
    """Decimal text of ``value`` with ``digits`` significant digits, rounded in direction ``rounding``."""
    if value == 0:
        return "0"
    ctx = Context(prec=digits, rounding=rounding, Emax=10**9, Emin=-10**9)
    numerator, denominator = int(value.numerator), int(value.denominator)
    return format(ctx.divide(Decimal(numerator), Decimal(denominator)), "E")


class IntervalValue(BaseModel):
    """Enclosure [lo, hi] of a real number.

    Endpoints are the exact binary values produced by outward-rounded
    arithmetic at ``precision_bits``, stored as fractions.
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    lo: Fraction
    hi: Fraction
    precision_bits: int = Field(gt=0)

    @field_validator("lo", "hi")
    @classmethod
    def _builtin_ints(cls, v: Fraction) -> Fraction:
        # mpz parts from the gmpy backend break Decimal and json
        return Fraction(int(v.numerator), int(v.denominator))

    @model_validator(mode="after")
    def _ordered(self) -> "IntervalValue":
        if self.lo > self.hi:
            raise ValueError("interval endpoints out of order")
        return self

    @field_serializer("lo")
    def _serialize_lo(self, v: Fraction) -> str:
        return format_endpoint(v, ROUND_FLOOR)

    @field_serializer("hi")
    def _serialize_hi(self, v: Fraction) -> str:
        return format_endpoint(v, ROUND_CEILING)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def sign(self) -> Optional[int]:
        """+1 or -1 when the interval excludes zero, else None."""
        if self.lo > 0:
            return 1
        if self.hi < 0:
            return -1
        return None

    def excludes_zero(self) -> bool:
        return self.sign() is not None

    def contains(self, x: Union[Fraction, int]) -> bool:
        return self.lo <= x <= self.hi

    def magnitude(self) -> Fraction:
        """Upper bound of |x| over the interval."""
        return max(abs(self.lo), abs(self.hi))

    def __float__(self) -> float:
        return float(self.midpoint)
