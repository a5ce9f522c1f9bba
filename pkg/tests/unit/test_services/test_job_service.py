"""
Unit Tests for the sweep job registry
"""

import pytest

from app.services.job_service import (
    JobState,
    create_job,
    delete_job,
    generate_job_id,
    get_active_jobs_count,
    get_job,
    get_result_file_path,
    list_jobs,
    update_job_status,
)


def test_job_ids_are_unique():
    ids = {generate_job_id() for _ in range(50)}
    assert len(ids) == 50
    assert all(job_id.startswith("job_") for job_id in ids)


def test_create_job_records_config():
    config = {"grid_name": "fig1", "absolute": False}
    job_id = create_job("benchmark", config, grid="fig1")

    job = get_job(job_id)
    assert job["job_type"] == "benchmark"
    assert job["status"] == JobState.PENDING.value
    assert job["config"] == config
    assert job["grid"] == "fig1"
    assert "completed_at" not in job


def test_final_states_are_timestamped():
    job_id = create_job("benchmark", {})

    update_job_status(job_id, "processing")
    assert get_job(job_id)["status"] == "processing"
    assert "completed_at" not in get_job(job_id)

    update_job_status(job_id, "completed", rows_count=5, skipped=[], violations=[])
    job = get_job(job_id)
    assert job["status"] == "completed"
    assert job["rows_count"] == 5
    assert "completed_at" in job


def test_unknown_status_is_rejected():
    job_id = create_job("benchmark", {})
    with pytest.raises(ValueError):
        update_job_status(job_id, "paused")


def test_update_of_deleted_job_is_ignored():
    job_id = create_job("benchmark", {})
    delete_job(job_id)
    update_job_status(job_id, "completed", rows_count=1)
    assert get_job(job_id) is None


def test_delete_job_removes_result_file():
    job_id = create_job("benchmark", {})
    result = get_result_file_path(job_id)
    result.write_text("alpha\n")
    assert result.suffix == ".csv"

    assert delete_job(job_id) is True
    assert not result.exists()
    assert delete_job(job_id) is False


def test_list_and_count_jobs():
    first = create_job("benchmark", {})
    second = create_job("benchmark", {})
    other = create_job("table", {})

    update_job_status(first, "processing")
    update_job_status(second, "processing")
    update_job_status(other, "failed", error="boom")

    assert get_active_jobs_count() == 2
    assert {j["job_id"] for j in list_jobs("benchmark")} == {first, second}
    assert len(list_jobs()) == 3
