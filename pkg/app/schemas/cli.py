"""Command-line configuration schema."""
from typing import Optional

from pydantic import BaseModel, Field, model_validator

from app.schemas.report import ReportFormat


class CliConfig(BaseModel):
    precision_bits: int = Field(default=128, ge=16)
    max_precision_bits: int = Field(default=512, ge=16)
    format: ReportFormat = ReportFormat.JSON
    cache_dir: str = "./cache"
    n_lo: Optional[int] = None
    n_hi: Optional[int] = None
    with_metadata: bool = False

    @model_validator(mode="after")
    def _check(self) -> "CliConfig":
        if self.precision_bits > self.max_precision_bits:
            raise ValueError("precision_bits must not exceed max_precision_bits")
        if self.n_lo is not None and self.n_hi is not None and self.n_lo > self.n_hi:
            raise ValueError(f"empty range [{self.n_lo}, {self.n_hi}]")
        return self
