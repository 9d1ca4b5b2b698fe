"""API V1 Router - combines all route modules."""
from fastapi import APIRouter

from app.api.v1.routes import (
    health,
    sequences,
    checks,
    asymptotics,
    bounds,
)

api_router = APIRouter()

# Health check routes
api_router.include_router(health.router, prefix="/health", tags=["Health"])

# Sequence generation
api_router.include_router(sequences.router, prefix="/sequences", tags=["Sequences"])

# Monotonicity certificates
api_router.include_router(checks.router, prefix="/checks", tags=["Checks"])

# Asymptotic constants and expansions
api_router.include_router(asymptotics.router, prefix="/asymptotics", tags=["Asymptotics"])

# Explicit bound re-verification
api_router.include_router(bounds.router, prefix="/bounds", tags=["Bounds"])
