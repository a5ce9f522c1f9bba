"""
Benchmark Job Routes
Start welfare sweeps in the background, poll them, fetch their rows
"""

from typing import Any, Dict, List, Optional

import pandas as pd
from fastapi import APIRouter, BackgroundTasks, HTTPException, Request, status
from fastapi.responses import FileResponse, JSONResponse

from app.api.models.requests import BenchmarkRequest
from app.api.models.responses import JobCreated, JobList, JobResult, JobStatus, Link
from app.core.bench import CSV_COLUMNS
from app.core.utils import load_grid_config
from app.services.benchmark_service import BenchmarkService
from app.services.job_service import (
    JobState,
    create_job,
    delete_job,
    get_job,
    get_result_file_path,
    list_jobs,
)

router = APIRouter()


def _links(job_id: str, request: Request) -> List[Link]:
    root = f"{request.base_url}api/v1/jobs/{job_id}"
    return [
        Link(rel="status", href=root),
        Link(rel="result", href=f"{root}/result"),
        Link(rel="csv", href=f"{root}/result.csv"),
    ]


def _require_job(job_id: str) -> Dict[str, Any]:
    job = get_job(job_id)
    if job is None:
        raise HTTPException(
            status_code=status.HTTP_404_NOT_FOUND, detail=f"Job {job_id} not found"
        )
    return job


def _status(job: Dict[str, Any], request: Optional[Request] = None) -> JobStatus:
    links = _links(job["job_id"], request) if request is not None else []
    return JobStatus(**job, links=links)


@router.post(
    "/benchmark",
    response_model=JobCreated,
    status_code=status.HTTP_202_ACCEPTED,
    summary="Run a welfare sweep",
)
async def run_benchmark(
    request: Request,
    background_tasks: BackgroundTasks,
    benchmark_request: BenchmarkRequest,
):
    """
    Evaluate every point of a grid in the background.

    Pass either the name of a bundled grid (`fig1`, `fig2`) or an inline
    grid. Poll the `status` link, then read the rows from `result` or
    download them from `csv`.
    """
    grid = benchmark_request.grid or load_grid_config(benchmark_request.grid_name)
    job_id = create_job(
        "benchmark", benchmark_request.model_dump(mode="json"), grid=grid.name
    )
    background_tasks.add_task(
        BenchmarkService.run_benchmark,
        job_id,
        grid.model_dump(mode="json"),
        benchmark_request.absolute,
    )
    return JobCreated(
        job_id=job_id,
        status=get_job(job_id)["status"],
        points=grid.size,
        links=_links(job_id, request),
    )


@router.get("", response_model=JobList, summary="List jobs")
async def get_jobs(request: Request):
    return JobList(jobs=[_status(job, request) for job in list_jobs()])


@router.get("/{job_id}", response_model=JobStatus, summary="Get job status")
async def get_job_status(job_id: str, request: Request):
    """Status is `pending`, `processing`, `completed` or `failed`."""
    return _status(_require_job(job_id), request)


def _completed_result(job_id: str):
    """The CSV path of a completed job, or a 202 response carrying its status"""
    job = _require_job(job_id)
    if job["status"] != JobState.COMPLETED.value:
        return JSONResponse(
            status_code=status.HTTP_202_ACCEPTED, content=_status(job).model_dump()
        )
    path = get_result_file_path(job_id)
    if not path.exists():
        raise HTTPException(
            status_code=status.HTTP_500_INTERNAL_SERVER_ERROR,
            detail="Result file not found",
        )
    return path


@router.get("/{job_id}/result", response_model=JobResult, summary="Get sweep rows")
async def get_job_result(job_id: str):
    """Rows of a completed sweep in CSV column order; 202 while it runs."""
    outcome = _completed_result(job_id)
    if isinstance(outcome, JSONResponse):
        return outcome
    frame = pd.read_csv(outcome)
    # JSON has no NaN: empty CSV cells become null
    frame = frame.astype(object).where(frame.notna(), None)
    return JobResult(
        job_id=job_id, columns=CSV_COLUMNS, rows=frame.to_dict(orient="records")
    )


@router.get("/{job_id}/result.csv", summary="Download the sweep CSV")
async def download_job_result(job_id: str):
    outcome = _completed_result(job_id)
    if isinstance(outcome, JSONResponse):
        return outcome
    return FileResponse(outcome, media_type="text/csv", filename=f"{job_id}.csv")


@router.delete(
    "/{job_id}", status_code=status.HTTP_204_NO_CONTENT, summary="Delete a job"
)
async def cleanup_job(job_id: str):
    """Forget a job and remove its CSV."""
    if not delete_job(job_id):
        raise HTTPException(
            status_code=status.HTTP_404_NOT_FOUND, detail=f"Job {job_id} not found"
        )
    return None
