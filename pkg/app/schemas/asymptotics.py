"""Asymptotic model and expansion schemas."""
from decimal import ROUND_CEILING
from fractions import Fraction
from typing import List, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, field_serializer, model_validator

from app.schemas.interval import IntervalValue, format_endpoint
from app.schemas.sequence import SequenceFamily

Rational = Union[Fraction, int]


class QuadraticSurd(BaseModel):
    """Exact ``a + b*sqrt(2)`` with rational a, b."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    a: Fraction = Fraction(0)
    b: Fraction = Fraction(0)

    @field_serializer("a", "b")
    def _serialize(self, v: Fraction) -> str:
        return str(v)

    @classmethod
    def of(cls, a: Rational = 0, b: Rational = 0) -> "QuadraticSurd":
        return cls(a=Fraction(a), b=Fraction(b))

    def __add__(self, other: "QuadraticSurd") -> "QuadraticSurd":
        return QuadraticSurd(a=self.a + other.a, b=self.b + other.b)

    def __neg__(self) -> "QuadraticSurd":
        return QuadraticSurd(a=-self.a, b=-self.b)

    def __sub__(self, other: "QuadraticSurd") -> "QuadraticSurd":
        return self + (-other)

    def __mul__(self, other: Union["QuadraticSurd", Rational]) -> "QuadraticSurd":
        if not isinstance(other, QuadraticSurd):
            other = QuadraticSurd.of(other)
        return QuadraticSurd(
            a=self.a * other.a + 2 * self.b * other.b,
            b=self.a * other.b + self.b * other.a,
        )

    __rmul__ = __mul__

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def __str__(self) -> str:
        if self.b == 0:
            return str(self.a)
        if self.a == 0:
            return f"{self.b}*sqrt(2)"
        sign = "+" if self.b > 0 else "-"
        return f"{self.a}{sign}{abs(self.b)}*sqrt(2)"


class AsymptoticModel(BaseModel):
    """Certified (lambda, mu, nu) for the S family with exponent vector ``r``."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True, populate_by_name=True)

    r: Tuple[int, ...]
    lam: IntervalValue = Field(alias="lambda")
    mu: IntervalValue
    nu: IntervalValue
    residual: Fraction
    tolerance: Fraction
    iterations: int = 0

    @model_validator(mode="after")
    def _check(self) -> "AsymptoticModel":
        if not (self.lam.lo > 0 and self.lam.hi < 1):
            raise ValueError("lambda must lie strictly inside (0, 1)")
        if self.residual > self.tolerance:
            raise ValueError("residual exceeds tolerance")
        return self

    @field_serializer("residual", "tolerance")
    def _serialize_upper(self, v: Fraction) -> str:
        return format_endpoint(v, ROUND_CEILING)

    @property
    def weight(self) -> int:
        """Total exponent r_0 + ... + r_m."""
        return sum(self.r)

    @property
    def precision_bits(self) -> int:
        return self.lam.precision_bits


class ExpansionSpec(BaseModel):
    """``prefactor * base**N * (1 + sum c_k / N**k)`` with ``N = n + index_shift``.

    The prefactor is ``sqrt(prefactor_radicand / (4*pi*N**prefactor_power))``.
    """
    model_config = ConfigDict(frozen=True)

    family: SequenceFamily
    growth_base: QuadraticSurd
    prefactor_radicand: QuadraticSurd
    prefactor_power: int = Field(ge=0)
    correction_coeffs: List[QuadraticSurd] = Field(default_factory=list)
    index_shift: int = 0

    @model_validator(mode="after")
    def _family(self) -> "ExpansionSpec":
        if self.family not in (SequenceFamily.MOTZKIN, SequenceFamily.SCHROEDER, SequenceFamily.TRINOMIAL):
            raise ValueError(f"no explicit expansion for {self.family.value}")
        return self

    @property
    def available_terms(self) -> int:
        return len(self.correction_coeffs)


class ExpansionEvaluation(BaseModel):
    """One exact term compared with its asymptotic approximation."""
    model_config = ConfigDict(frozen=True)

    label: str
    n: int
    terms: int
    exact: str
    approximation: IntervalValue
    relative_error: IntervalValue
    model: Optional[AsymptoticModel] = None
