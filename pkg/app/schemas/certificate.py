"""Monotonicity certificate schemas."""
from enum import Enum
from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.schemas.sequence import SequenceId


class Direction(str, Enum):
    INCREASING = "increasing"
    DECREASING = "decreasing"


class Claim(str, Enum):
    ROOT_INCREASING = "root-increasing"
    ROOT_DECREASING = "root-decreasing"
    RATIO_INCREASING = "ratio-increasing"
    RATIO_DECREASING = "ratio-decreasing"

    @classmethod
    def of(cls, kind: str, direction: Direction) -> "Claim":
        return cls(f"{kind}-{direction.value}")

    @property
    def direction(self) -> Direction:
        return Direction(self.value.split("-", 1)[1])

    @property
    def is_ratio(self) -> bool:
        return self.value.startswith("ratio")


class DecisionMethod(str, Enum):
    INTERVAL_CERTIFIED = "interval"
    EXACT_BIGINT = "exact"


class Verdict(BaseModel):
    model_config = ConfigDict(frozen=True)

    index: int
    claim: Claim
    holds: bool
    method: DecisionMethod
    precision_bits: Optional[int] = None  # set for interval-certified verdicts


class Certificate(BaseModel):
    model_config = ConfigDict(frozen=True)

    id: SequenceId
    claim: Claim
    n_lo: int
    n_hi: int
    verdicts: List[Verdict]
    all_hold: bool
    first_failure: Optional[int] = None
    holds_from: Optional[int] = None

    @model_validator(mode="after")
    def _consistent(self) -> "Certificate":
        if self.all_hold != all(v.holds for v in self.verdicts):
            raise ValueError("all_hold must equal the conjunction of the verdicts")
        if (self.first_failure is None) != self.all_hold:
            raise ValueError("first_failure is set exactly when a verdict fails")
        return self

    @classmethod
    def assemble(cls, id: SequenceId, claim: Claim, n_lo: int, n_hi: int, verdicts: List[Verdict]) -> "Certificate":
        """Deterministic reduction of per-index verdicts (already ordered by index)."""
        failures = [v.index for v in verdicts if not v.holds]
        holds_from = n_lo
        for v in verdicts:
            if not v.holds:
                holds_from = v.index + 1
        return cls(
            id=id,
            claim=claim,
            n_lo=n_lo,
            n_hi=n_hi,
            verdicts=verdicts,
            all_hold=not failures,
            first_failure=failures[0] if failures else None,
            holds_from=holds_from if holds_from <= n_hi else None,
        )

    @property
    def exact_count(self) -> int:
        return sum(1 for v in self.verdicts if v.method == DecisionMethod.EXACT_BIGINT)


class CheckRequest(BaseModel):
    """Body of ``POST /api/v1/checks``."""
    family: str
    r: Optional[str] = None
    claim: Claim
    n_lo: int = Field(default=1, ge=0)
    n_hi: int = Field(ge=0)
