"""Logging configuration with request logging and certification trails."""
import logging
import os
import sys
import time
from datetime import datetime, timezone
from functools import wraps
from logging.handlers import TimedRotatingFileHandler
from typing import Any, Callable, Dict, Optional

import structlog
from fastapi import Request, Response
from starlette.middleware.base import BaseHTTPMiddleware

from app.core.config import settings


def _daily_handler(filename: str, level: int, formatter: logging.Formatter) -> TimedRotatingFileHandler:
    handler = TimedRotatingFileHandler(
        os.path.join(settings.LOG_DIR, filename),
        when="midnight",
        interval=1,
        backupCount=settings.LOG_RETENTION_DAYS,
    )
    handler.suffix = "%Y-%m-%d"
    handler.setLevel(level)
    handler.setFormatter(formatter)
    return handler


def setup_logging(level: Optional[str] = None):
    """Configure structured logging.

    Console output goes to stderr: the CLI writes its reports to stdout and
    those must stay byte-identical between runs.
    """
    log_level = getattr(logging, (level or settings.LOG_LEVEL).upper())

    if settings.LOG_TO_FILE and not os.path.exists(settings.LOG_DIR):
        os.makedirs(settings.LOG_DIR, exist_ok=True)

    root_logger = logging.getLogger()
    root_logger.setLevel(log_level)
    root_logger.handlers = []

    formatter = logging.Formatter(
        "%(asctime)s | %(levelname)-8s | %(name)s | %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S"
    )

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(log_level)
    console_handler.setFormatter(formatter)
    root_logger.addHandler(console_handler)

    if settings.LOG_TO_FILE:
        root_logger.addHandler(_daily_handler("app.log", log_level, formatter))
        root_logger.addHandler(_daily_handler("error.log", logging.ERROR, formatter))
        logging.getLogger("certification").addHandler(
            _daily_handler("certification.log", logging.INFO, formatter)
        )

    structlog.configure(
        processors=[
            structlog.stdlib.filter_by_level,
            structlog.stdlib.add_logger_name,
            structlog.stdlib.add_log_level,
            structlog.stdlib.PositionalArgumentsFormatter(),
            structlog.processors.TimeStamper(fmt="%Y-%m-%d %H:%M:%S"),
            structlog.processors.StackInfoRenderer(),
            structlog.processors.format_exc_info,
            structlog.processors.UnicodeDecoder(),
            structlog.processors.KeyValueRenderer(
                key_order=["timestamp", "level", "logger", "event"],
                drop_missing=True
            ),
        ],
        wrapper_class=structlog.stdlib.BoundLogger,
        context_class=dict,
        logger_factory=structlog.stdlib.LoggerFactory(),
        cache_logger_on_first_use=True,
    )


def get_logger(name: str):
    """Get a structured logger instance."""
    return structlog.get_logger(name)


api_logger = get_logger("api")
certification_logger = get_logger("certification")


class RequestLoggingMiddleware(BaseHTTPMiddleware):
    """Middleware for logging all API requests."""

    async def dispatch(self, request: Request, call_next) -> Response:
        start_time = time.time()
        request_id = request.headers.get("X-Request-ID", f"req_{int(time.time() * 1000)}")

        api_logger.info(
            "request_started",
            request_id=request_id,
            method=request.method,
            path=request.url.path,
            query=str(request.query_params),
        )

        try:
            response = await call_next(request)
        except Exception as e:
            api_logger.error(
                "request_failed",
                request_id=request_id,
                path=request.url.path,
                error=str(e),
                error_type=type(e).__name__,
                process_time_ms=round((time.time() - start_time) * 1000, 2)
            )
            raise

        process_time = time.time() - start_time
        log_level = "info" if response.status_code < 400 else "warning" if response.status_code < 500 else "error"
        getattr(api_logger, log_level)(
            "request_completed",
            request_id=request_id,
            method=request.method,
            path=request.url.path,
            status_code=response.status_code,
            process_time_ms=round(process_time * 1000, 2)
        )
        response.headers["X-Request-ID"] = request_id
        response.headers["X-Process-Time"] = f"{process_time:.4f}"
        return response


class CertificationLogger:
    """Trail of every certificate, bound grid and solver run."""

    @staticmethod
    def log_certificate(
        sequence: str,
        claim: str,
        n_lo: int,
        n_hi: int,
        all_hold: bool,
        first_failure: Optional[int],
        exact_verdicts: int,
    ):
        certification_logger.info(
            "certificate_completed",
            sequence=sequence,
            claim=claim,
            n_lo=n_lo,
            n_hi=n_hi,
            all_hold=all_hold,
            first_failure=first_failure,
            exact_verdicts=exact_verdicts,
            timestamp=datetime.now(timezone.utc).isoformat()
        )

    @staticmethod
    def log_bound_grid(name: str, n_lo: int, n_hi: int, failures: int, details: Optional[Dict[str, Any]] = None):
        certification_logger.info(
            "bound_grid_completed",
            name=name,
            n_lo=n_lo,
            n_hi=n_hi,
            failures=failures,
            details=details,
            timestamp=datetime.now(timezone.utc).isoformat()
        )

    @staticmethod
    def log_solver(r: str, iterations: int, precision_bits: int, residual: str):
        certification_logger.info(
            "lambda_solved",
            r=r,
            iterations=iterations,
            precision_bits=precision_bits,
            residual=residual,
            timestamp=datetime.now(timezone.utc).isoformat()
        )


def log_function_call(logger_name: str = None):
    """Decorator to log function calls with elapsed time."""
    def decorator(func: Callable):
        _logger = get_logger(logger_name or func.__module__)

        @wraps(func)
        def wrapper(*args, **kwargs):
            start_time = time.time()
            _logger.debug(f"calling_{func.__name__}", args_count=len(args), kwargs_keys=list(kwargs.keys()))
            try:
                result = func(*args, **kwargs)
            except Exception as e:
                elapsed = time.time() - start_time
                _logger.error(f"failed_{func.__name__}", error=str(e), elapsed_ms=round(elapsed * 1000, 2))
                raise
            elapsed = time.time() - start_time
            _logger.debug(f"completed_{func.__name__}", elapsed_ms=round(elapsed * 1000, 2))
            return result

        return wrapper

    return decorator


certification = CertificationLogger()
