"""
API Response Models
Pydantic models for API responses
"""

from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field


class ServiceInfoResponse(BaseModel):
    service: str
    version: str
    status: str
    lp_method: str
    grids: List[str] = Field(description="Bundled sweep grids usable as `grid_name`")
    endpoints: Dict[str, str]


class HealthResponse(BaseModel):
    status: str
    timestamp: str
    uptime_seconds: float
    active_jobs: int


class ErrorResponse(BaseModel):
    """Body of every toolkit error: the exception class and its message"""
    error: str
    message: str


class Link(BaseModel):
    rel: str = Field(..., description="Relation type of the link.")
    href: str = Field(..., description="The target URL of the link.")


class JobCreated(BaseModel):
    job_id: str
    status: str
    points: int = Field(description="Grid points the sweep will evaluate")
    links: List[Link]


class JobStatus(BaseModel):
    """State of a sweep job; the counts are filled in once it completes"""
    job_id: str
    job_type: str
    status: str
    grid: Optional[str] = None
    created_at: str
    completed_at: Optional[str] = None
    error: Optional[str] = None
    rows_count: Optional[int] = None
    skipped: List[str] = Field(
        default_factory=list, description="Grid points with an invalid instance"
    )
    violations: List[str] = Field(
        default_factory=list, description="Welfare ordering violations"
    )
    links: List[Link] = Field(default_factory=list)


class JobList(BaseModel):
    jobs: List[JobStatus]


class JobResult(BaseModel):
    """Rows of a completed sweep, keyed by CSV column"""
    job_id: str
    columns: List[str]
    rows: List[Dict[str, Any]]


class DocumentResponse(BaseModel):
    """A versioned toolkit document"""
    kind: str
    version: str
    fingerprint: Optional[str] = None
    payload: Dict[str, Any]


class SampleResponse(BaseModel):
    """Sampled recommendation sets, agents labelled 1..N"""
    fingerprint: str
    seed: int
    state: int
    sets: List[List[int]]
