"""Sequence schemas."""
from enum import Enum
from fractions import Fraction
from math import gcd
from typing import List, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class SequenceFamily(str, Enum):
    BERNOULLI_ABS_2N = "bernoulli-abs"
    TANGENT_ABS_ODD = "tangent-abs"
    EULER_ABS_EVEN = "euler-abs"
    S_FAMILY = "sfam"
    MOTZKIN = "motzkin"
    SCHROEDER = "schroder"
    TRINOMIAL = "trinomial"

    @property
    def first_index(self) -> int:
        """Smallest index the family is defined at."""
        if self in (SequenceFamily.BERNOULLI_ABS_2N, SequenceFamily.TANGENT_ABS_ODD):
            return 1
        return 0


class SequenceId(BaseModel):
    """A sequence family plus its parameters (only the S family takes any)."""
    model_config = ConfigDict(frozen=True)

    family: SequenceFamily
    r: Optional[Tuple[int, ...]] = None

    @model_validator(mode="after")
    def _check_params(self) -> "SequenceId":
        if self.family == SequenceFamily.S_FAMILY:
            if not self.r:
                raise ValueError("the S family needs a non-empty exponent vector r")
            if any(x < 0 for x in self.r):
                raise ValueError("exponents must be nonnegative")
            if self.r[0] <= 0:
                raise ValueError("r_0 must be positive")
        elif self.r is not None:
            raise ValueError(f"family {self.family.value} takes no parameters")
        return self

    @property
    def params(self) -> str:
        """Canonical parameter string, e.g. ``r=2,2``; empty without parameters."""
        if self.r is None:
            return ""
        return "r=" + ",".join(str(x) for x in self.r)

    @property
    def label(self) -> str:
        return f"{self.family.value}[{self.params}]" if self.r else self.family.value

    @classmethod
    def parse(cls, family: str, r: Optional[str] = None) -> "SequenceId":
        vector = None
        if r is not None and r.strip():
            vector = tuple(int(part) for part in r.replace("r=", "").split(","))
        return cls(family=SequenceFamily(family), r=vector)


class ValueKind(str, Enum):
    INTEGER = "integer"
    RATIONAL = "rational"


class ExactValue(BaseModel):
    """Exact term value: an integer or a rational in lowest terms."""
    model_config = ConfigDict(frozen=True)

    kind: ValueKind
    numerator: int
    denominator: int = 1

    @field_validator("denominator")
    @classmethod
    def _positive_denominator(cls, v: int) -> int:
        if v < 1:
            raise ValueError("denominator must be >= 1")
        return v

    @model_validator(mode="after")
    def _lowest_terms(self) -> "ExactValue":
        if self.kind == ValueKind.INTEGER and self.denominator != 1:
            raise ValueError("integer values have denominator 1")
        if gcd(self.numerator, self.denominator) != 1:
            raise ValueError("rational values are stored in lowest terms")
        return self

    @classmethod
    def integer(cls, value: int) -> "ExactValue":
        return cls(kind=ValueKind.INTEGER, numerator=int(value))

    @classmethod
    def rational(cls, value: Union[Fraction, int]) -> "ExactValue":
        value = Fraction(value)
        return cls(kind=ValueKind.RATIONAL, numerator=value.numerator, denominator=value.denominator)

    def as_fraction(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    def render(self) -> str:
        """Decimal text: ``numerator`` or ``numerator/denominator``."""
        if self.kind == ValueKind.INTEGER:
            return str(self.numerator)
        return f"{self.numerator}/{self.denominator}"

    def is_positive(self) -> bool:
        return self.numerator > 0


class SequenceWindow(BaseModel):
    """Contiguous terms ``values[i] = a_{start + i}``."""
    model_config = ConfigDict(frozen=True)

    id: SequenceId
    start: int = Field(ge=0)
    values: List[ExactValue]

    @model_validator(mode="after")
    def _check_start(self) -> "SequenceWindow":
        if self.start < self.id.family.first_index:
            raise ValueError(
                f"{self.id.family.value} starts at index {self.id.family.first_index}"
            )
        return self

    @property
    def stop(self) -> int:
        """One past the last index."""
        return self.start + len(self.values)

    def term(self, n: int) -> ExactValue:
        if not self.start <= n < self.stop:
            raise IndexError(f"index {n} outside window [{self.start}, {self.stop})")
        return self.values[n - self.start]
