"""
Integration Tests for benchmark jobs
"""

from fastapi.testclient import TestClient

from app.core.bench import CSV_COLUMNS

GRID = {
    "name": "tiny",
    "alphas": [0.5],
    "cost_families": ["linear"],
    "coeffs": [0.5],
    "priors": [0.4, 0.9],
    "n_agents": [4],
}


def test_benchmark_job_lifecycle(client: TestClient):
    response = client.post("/api/v1/jobs/benchmark", json={"grid": GRID})
    assert response.status_code == 202
    created = response.json()
    job_id = created["job_id"]
    assert {link["rel"] for link in created["links"]} == {"status", "result", "csv"}
    assert created["points"] == 2

    # background tasks have run by the time the test client returns
    status = client.get(f"/api/v1/jobs/{job_id}").json()
    assert status["status"] == "completed"
    assert status["rows_count"] == 2
    assert status["grid"] == "tiny"

    result = client.get(f"/api/v1/jobs/{job_id}/result")
    assert result.status_code == 200
    data = result.json()
    assert data["columns"] == CSV_COLUMNS
    assert [row["mu1"] for row in data["rows"]] == [0.4, 0.9]

    assert client.delete(f"/api/v1/jobs/{job_id}").status_code == 204
    assert client.get(f"/api/v1/jobs/{job_id}").status_code == 404


def test_unknown_grid_name(client: TestClient):
    response = client.post("/api/v1/jobs/benchmark", json={"grid_name": "fig9"})
    assert response.status_code == 400


def test_grid_source_required(client: TestClient):
    assert client.post("/api/v1/jobs/benchmark", json={}).status_code == 422


def test_unknown_job(client: TestClient):
    assert client.get("/api/v1/jobs/job_missing").status_code == 404
    assert client.get("/api/v1/jobs/job_missing/result").status_code == 404
    assert client.delete("/api/v1/jobs/job_missing").status_code == 404


def test_csv_download_and_listing(client: TestClient):
    body = {"grid": GRID, "absolute": True}
    job_id = client.post("/api/v1/jobs/benchmark", json=body).json()["job_id"]

    response = client.get(f"/api/v1/jobs/{job_id}/result.csv")
    assert response.status_code == 200
    assert response.headers["content-type"].startswith("text/csv")
    lines = response.text.strip().splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS)
    assert all(line.endswith(",absolute") for line in lines[1:])

    jobs = client.get("/api/v1/jobs").json()["jobs"]
    assert [j["job_id"] for j in jobs] == [job_id]
    assert jobs[0]["job_type"] == "benchmark"


def test_result_of_unfinished_job_is_accepted(client: TestClient):
    from app.services.job_service import create_job

    job_id = create_job("benchmark", {}, grid="fig1")
    response = client.get(f"/api/v1/jobs/{job_id}/result")
    assert response.status_code == 202
    assert response.json()["status"] == "pending"
    assert client.get(f"/api/v1/jobs/{job_id}/result.csv").status_code == 202
