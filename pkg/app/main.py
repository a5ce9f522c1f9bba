"""
Persuasion Toolkit API Server
Main FastAPI application with clean architecture
"""

import uvicorn
from fastapi import FastAPI, Request, status
from fastapi.responses import JSONResponse

from app import __version__
from app.api.models.responses import ErrorResponse
from app.api.routes import health, jobs, mechanisms
from app.core.errors import DomainViolation, InputError, ToolkitError
from config.settings import settings
from monitoring.logging.config import get_logger, setup_logging

setup_logging(settings.LOG_LEVEL)
logger = get_logger("persuasion_toolkit.api")

# Initialize FastAPI app
app = FastAPI(
    title="Persuasion Toolkit API",
    description=(
        "Optimal private and public signaling for two-location resource competition."
    ),
    version=__version__,
    docs_url="/docs",
    redoc_url="/redoc",
    license_info={
        "name": "MIT License",
        "url": "https://opensource.org/licenses/MIT",
    },
)


def error_status(exc: ToolkitError) -> int:
    """HTTP status of a toolkit error"""
    if isinstance(exc, InputError):
        return status.HTTP_400_BAD_REQUEST
    if isinstance(exc, DomainViolation):
        return status.HTTP_422_UNPROCESSABLE_ENTITY
    return status.HTTP_500_INTERNAL_SERVER_ERROR


@app.exception_handler(ToolkitError)
async def toolkit_error_handler(request: Request, exc: ToolkitError):
    code = error_status(exc)
    if code >= 500:
        logger.error(f"{request.url.path}: {type(exc).__name__}: {exc}")
    return JSONResponse(
        status_code=code,
        content=ErrorResponse(error=type(exc).__name__, message=str(exc)).model_dump(),
    )


# --- API Routers ---
app.include_router(health.router, tags=["Health"])
app.include_router(mechanisms.router, prefix="/api/v1", tags=["Mechanisms"])
app.include_router(jobs.router, prefix="/api/v1/jobs", tags=["Jobs"])


if __name__ == "__main__":
    uvicorn.run(
        "app.main:app",
        host=settings.HOST,
        port=settings.PORT,
        reload=settings.ENVIRONMENT == "development",
        access_log=True,
    )
