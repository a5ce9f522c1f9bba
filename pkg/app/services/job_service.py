"""
Sweep Job Registry
In-process bookkeeping for background sweeps and their CSV results
"""

import uuid
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional

from config.settings import settings
from monitoring.logging.config import get_logger

logger = get_logger("persuasion_toolkit.job_service")


class JobState(str, Enum):
    PENDING = "pending"
    PROCESSING = "processing"
    COMPLETED = "completed"
    FAILED = "failed"


FINAL_STATES = (JobState.COMPLETED, JobState.FAILED)

# job_id -> record; lost on restart
jobs_storage: Dict[str, Dict[str, Any]] = {}

OUTPUT_DIR = settings.OUTPUT_DIR


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


def generate_job_id() -> str:
    return f"job_{uuid.uuid4().hex[:8]}_{int(datetime.now(timezone.utc).timestamp())}"


def create_job(job_type: str, config: Dict[str, Any], **fields) -> str:
    """Register a pending job and return its id"""
    job_id = generate_job_id()
    jobs_storage[job_id] = {
        "job_id": job_id,
        "job_type": job_type,
        "status": JobState.PENDING.value,
        "created_at": _now(),
        "config": config,
        **fields,
    }
    logger.debug(f"registered {job_type} job {job_id}")
    return job_id


def get_job(job_id: str) -> Optional[Dict[str, Any]]:
    return jobs_storage.get(job_id)


def list_jobs(job_type: Optional[str] = None) -> List[Dict[str, Any]]:
    """All jobs, oldest first, optionally of one type"""
    jobs = [
        j
        for j in jobs_storage.values()
        if job_type is None or j["job_type"] == job_type
    ]
    return sorted(jobs, key=lambda j: j["created_at"])


def update_job_status(job_id: str, status: str, **fields) -> None:
    """Move a job to `status` and merge `fields` into its record.

    Unknown ids are ignored: the job may have been deleted while running.
    """
    job = jobs_storage.get(job_id)
    if job is None:
        logger.warning(f"status update for unknown job {job_id}")
        return
    state = JobState(status)
    job["status"] = state.value
    job.update(fields)
    if state in FINAL_STATES:
        job["completed_at"] = _now()


def get_active_jobs_count() -> int:
    processing = JobState.PROCESSING.value
    return sum(1 for j in jobs_storage.values() if j["status"] == processing)


def get_result_file_path(job_id: str) -> Path:
    return OUTPUT_DIR / f"{job_id}_result.csv"


def delete_job(job_id: str) -> bool:
    """Forget a job and remove its CSV; False when the id is unknown"""
    if jobs_storage.pop(job_id, None) is None:
        return False
    get_result_file_path(job_id).unlink(missing_ok=True)
    return True
