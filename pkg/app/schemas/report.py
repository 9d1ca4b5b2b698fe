"""Cache record and report schemas."""
import re
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, List, Optional, Type, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from app.schemas.sequence import ExactValue, SequenceFamily

INTEGER_PATTERN = re.compile(r"^-?(0|[1-9][0-9]*)$")


def parse_decimal_integer(text: str) -> int:
    """Parse a canonical decimal integer (no sign padding, no leading zeros)."""
    if not INTEGER_PATTERN.match(text):
        raise ValueError(f"not a canonical decimal integer: {text!r}")
    return int(text)


class CacheRecord(BaseModel):
    """One ``family|params|n|value`` line of a cache file."""
    model_config = ConfigDict(frozen=True)

    family: SequenceFamily
    params: str = ""
    index: int = Field(ge=0)
    value: str

    @field_validator("value")
    @classmethod
    def _canonical_value(cls, v: str) -> str:
        numerator, _, denominator = v.partition("/")
        num = parse_decimal_integer(numerator)
        if denominator:
            den = parse_decimal_integer(denominator)
            if den < 1:
                raise ValueError("denominator must be positive")
            reduced = Fraction(num, den)
            v = str(reduced.numerator) if reduced.denominator == 1 else f"{reduced.numerator}/{reduced.denominator}"
        return v

    @classmethod
    def parse(cls, line: str) -> "CacheRecord":
        parts = line.split("|")
        if len(parts) != 4:
            raise ValueError(f"expected 4 '|'-separated fields, got {len(parts)}")
        family, params, index, value = parts
        return cls(family=family, params=params, index=parse_decimal_integer(index), value=value)

    def render(self) -> str:
        return f"{self.family.value}|{self.params}|{self.index}|{self.value}"

    def exact_value(self) -> ExactValue:
        numerator, _, denominator = self.value.partition("/")
        if self.family == SequenceFamily.BERNOULLI_ABS_2N:
            return ExactValue.rational(Fraction(int(numerator), int(denominator or 1)))
        if denominator:
            raise ValueError(f"{self.family.value} values are integers, got {self.value}")
        return ExactValue.integer(int(numerator))


class ReportKind(str, Enum):
    CERTIFICATE = "certificate"
    BOUND_TABLE = "bound_table"
    ASYM_TABLE = "asym_table"
    ACCEPTANCE = "acceptance"


class ReportFormat(str, Enum):
    JSON = "json"
    CSV = "csv"


class ReportMetadata(BaseModel):
    tool: str
    version: str
    precision_bits: int
    max_precision_bits: int
    timestamp: Optional[str] = None


class CertificateRow(BaseModel):
    sequence: str
    claim: str
    index: int
    holds: bool
    method: str
    precision_bits: Optional[int] = None


class BoundRow(BaseModel):
    name: str
    claim: str
    index: Optional[int] = None
    point: Optional[str] = None
    lo: str
    hi: str
    holds: bool
    method: str = "interval"
    precision_bits: int
    reconstructed: bool = False


class AsymRow(BaseModel):
    sequence: str
    index: int
    terms: int
    exact: str
    approx_lo: str
    approx_hi: str
    rel_err_lo: str
    rel_err_hi: str
    method: str = "interval"


class AcceptanceRow(BaseModel):
    criterion: int
    name: str
    passed: bool
    detail: str = ""
    method: str = "exact+interval"


ROW_TYPES: Dict[ReportKind, Type[BaseModel]] = {
    ReportKind.CERTIFICATE: CertificateRow,
    ReportKind.BOUND_TABLE: BoundRow,
    ReportKind.ASYM_TABLE: AsymRow,
    ReportKind.ACCEPTANCE: AcceptanceRow,
}

ReportRow = Union[CertificateRow, BoundRow, AsymRow, AcceptanceRow]


class Report(BaseModel):
    kind: ReportKind
    metadata: ReportMetadata
    summary: Dict[str, Any] = Field(default_factory=dict)
    rows: List[ReportRow] = Field(default_factory=list)

    @model_validator(mode="after")
    def _rows_match_kind(self) -> "Report":
        expected = ROW_TYPES[self.kind]
        for row in self.rows:
            if not isinstance(row, expected):
                raise ValueError(f"{self.kind.value} reports take {expected.__name__} rows")
        return self
