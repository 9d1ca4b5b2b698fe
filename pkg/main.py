"""
seqcert HTTP API
Main application entry point
"""
from contextlib import asynccontextmanager
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from app.core.config import settings
from app.core.exceptions import CacheFormatError, ParameterError, SeqCertError
from app.core.logging import setup_logging, get_logger, RequestLoggingMiddleware
from app.api.v1.router import api_router
from app.api.v1.routes import health

# Setup logging
setup_logging()
logger = get_logger(__name__)


@asynccontextmanager
async def lifespan(app: FastAPI):
    """Application lifespan events."""
    logger.info("Starting seqcert API...", schedule=settings.precision_schedule)
    yield
    logger.info("Shutting down...")


# Create FastAPI application
app = FastAPI(
    title="seqcert",
    description="Exact sequence generation and certified monotonicity checks",
    version=settings.APP_VERSION,
    lifespan=lifespan,
    docs_url="/docs",
    redoc_url="/redoc"
)

# Request logging middleware
app.add_middleware(RequestLoggingMiddleware)


# Exception handlers
@app.exception_handler(SeqCertError)
async def seqcert_exception_handler(request: Request, exc: SeqCertError):
    """Parameter and cache errors are the caller's (422); numerical failures are 409."""
    status_code = 422 if isinstance(exc, (ParameterError, CacheFormatError)) else 409
    logger.warning("request_rejected", path=request.url.path, error=exc.message, status_code=status_code)
    return JSONResponse(
        status_code=status_code,
        content={
            "success": False,
            "message": exc.message,
            "error": type(exc).__name__,
            "detail": exc.details,
        }
    )


@app.exception_handler(Exception)
async def global_exception_handler(request, exc: Exception):
    """Global exception handler."""
    logger.error(f"Unhandled exception: {exc}", exc_info=True)
    return JSONResponse(
        status_code=500,
        content={
            "success": False,
            "message": "An unexpected error occurred",
            "detail": str(exc) if settings.DEBUG else "Internal Server Error"
        }
    )


# Include API router
app.include_router(api_router, prefix="/api/v1")

# Liveness at the root as well
app.include_router(health.router, prefix="/health", tags=["Health"])


# Root endpoint
@app.get("/", include_in_schema=False)
async def root():
    """Root endpoint."""
    return {
        "message": "seqcert API",
        "version": settings.APP_VERSION,
        "docs": "/docs",
        "health": "/health"
    }


if __name__ == "__main__":
    import uvicorn

    logger.info(f"Starting server on {settings.API_HOST}:{settings.API_PORT}")

    uvicorn.run(
        "main:app",
        host=settings.API_HOST,
        port=settings.API_PORT,
        reload=settings.DEBUG
    )
