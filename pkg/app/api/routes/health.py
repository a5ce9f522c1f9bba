"""
Health Check Routes
Service information and liveness endpoints
"""

import time
from datetime import datetime, timezone

from fastapi import APIRouter

from app import __version__
from app.api.models.responses import HealthResponse, ServiceInfoResponse
from app.core.utils import bundled_grids
from app.services.job_service import get_active_jobs_count
from config.settings import settings
from monitoring.health.checks import HealthChecker

router = APIRouter()

_STARTED = time.monotonic()


@router.get("/", response_model=ServiceInfoResponse)
async def root():
    """What the service offers and where"""
    return ServiceInfoResponse(
        service="Persuasion Toolkit API",
        version=__version__,
        status="running",
        lp_method=settings.LP_METHOD,
        grids=bundled_grids(),
        endpoints={
            "health": "/health",
            "health_detailed": "/health/detailed",
            "private_mechanism": "/api/v1/mechanisms/private",
            "public_mechanism": "/api/v1/mechanisms/public",
            "persuasion_bound": "/api/v1/mechanisms/bound",
            "sample": "/api/v1/mechanisms/sample",
            "equilibrium_check": "/api/v1/equilibrium/check",
            "benchmark": "/api/v1/jobs/benchmark",
            "jobs": "/api/v1/jobs",
            "docs": "/docs",
        },
    )


@router.get("/health", response_model=HealthResponse)
async def health_check():
    return HealthResponse(
        status="healthy",
        timestamp=datetime.now(timezone.utc).isoformat(),
        uptime_seconds=round(time.monotonic() - _STARTED, 3),
        active_jobs=get_active_jobs_count(),
    )


@router.get("/health/detailed")
def detailed_health_check():
    """Disk, memory, CPU, jobs, bundled grids and an LP smoke solve"""
    return HealthChecker.comprehensive_check()
