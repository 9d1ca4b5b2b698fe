"""Application configuration settings."""
from typing import List
from pydantic import model_validator
from pydantic_settings import BaseSettings
from functools import lru_cache


class Settings(BaseSettings):
    # Application
    APP_NAME: str = "seqcert"
    APP_VERSION: str = "1.0.0"
    APP_ENV: str = "development"
    DEBUG: bool = False
    API_HOST: str = "0.0.0.0"
    API_PORT: int = 8000

    # Logging
    LOG_LEVEL: str = "INFO"
    LOG_DIR: str = "logs"
    LOG_TO_FILE: bool = False
    LOG_RETENTION_DAYS: int = 7

    # Interval arithmetic
    PRECISION_BITS: int = 128
    MAX_PRECISION_BITS: int = 512
    GUARD_BITS: int = 32  # extra bits for pi and sqrt(2)

    # Lambda solver
    LAMBDA_TOLERANCE: float = 1e-12
    LAMBDA_MESH: int = 64

    # Cache and reports
    CACHE_DIR: str = "./cache"
    REPORT_FORMAT: str = "json"  # json or csv

    # Memo bounds (terms grow to the largest requested window)
    TERM_CACHE_SIZE: int = 4096
    BINOMIAL_CACHE_ROWS: int = 2048

    # Verdicts decided in a process pool when > 1
    CHECK_WORKERS: int = 1

    @model_validator(mode="after")
    def _check_precision(self) -> "Settings":
        if self.PRECISION_BITS < 16:
            raise ValueError("PRECISION_BITS must be at least 16")
        if self.PRECISION_BITS > self.MAX_PRECISION_BITS:
            raise ValueError("PRECISION_BITS must not exceed MAX_PRECISION_BITS")
        return self

    @property
    def precision_schedule(self) -> List[int]:
        return build_precision_schedule(self.PRECISION_BITS, self.MAX_PRECISION_BITS)

    class Config:
        env_file = ".env"
        case_sensitive = True
        extra = "ignore"


def build_precision_schedule(start_bits: int, max_bits: int) -> List[int]:
    """Doubling schedule from start_bits, always ending at max_bits."""
    schedule = []
    bits = start_bits
    while bits < max_bits:
        schedule.append(bits)
        bits *= 2
    schedule.append(max_bits)
    return schedule


@lru_cache()
def get_settings() -> Settings:
    return Settings()


settings = get_settings()
