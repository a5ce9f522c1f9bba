"""
Integration Tests for the mechanism and equilibrium endpoints
"""

import pytest
from fastapi.testclient import TestClient


def test_private_mechanism(client: TestClient, two_agent_spec):
    response = client.post(
        "/api/v1/mechanisms/private", json={"instance": two_agent_spec}
    )
    assert response.status_code == 200

    data = response.json()
    assert data["kind"] == "private_mechanism"
    assert data["payload"]["objective"] == pytest.approx(0.4)
    assert data["payload"]["marginals"] == [[1.0, 0.0], [0.0, 0.0]]


def test_public_mechanism(client: TestClient, two_agent_spec):
    response = client.post(
        "/api/v1/mechanisms/public", json={"instance": two_agent_spec}
    )
    assert response.status_code == 200

    payload = response.json()["payload"]
    assert payload["objective"] == pytest.approx(0.4)
    assert payload["support"] == [0, 1]
    assert payload["verification"]["ok"] is True


def test_bound(client: TestClient, two_agent_spec):
    response = client.post(
        "/api/v1/mechanisms/bound", json={"instance": two_agent_spec}
    )
    assert response.status_code == 200
    assert response.json()["payload"]["bound"] == pytest.approx(1.0)


def test_sample_is_seeded(client: TestClient, power_spec):
    body = {"instance": power_spec, "seed": 5, "draws": 20}
    first = client.post("/api/v1/mechanisms/sample", json=body).json()
    second = client.post("/api/v1/mechanisms/sample", json=body).json()
    assert first["sets"] == second["sets"]
    assert len(first["sets"]) == 20
    assert all(members == sorted(members) for members in first["sets"])


def test_fast_path_only_is_unprocessable(client: TestClient, power_spec):
    body = {"instance": dict(power_spec, prior1=0.95), "fast_path_only": True}
    response = client.post("/api/v1/mechanisms/private", json=body)
    assert response.status_code == 422
    assert response.json()["error"] == "DomainViolation"


def test_short_table_is_bad_request(client: TestClient, two_agent_spec):
    costs = {"family": "table", "values": [0.0, 0.5]}
    body = {"instance": dict(two_agent_spec, costs=costs)}
    response = client.post("/api/v1/mechanisms/public", json=body)
    assert response.status_code == 400
    assert response.json()["error"] == "InstanceStructureError"


def test_malformed_request(client: TestClient):
    response = client.post(
        "/api/v1/mechanisms/private", json={"instance": {"n_agents": 2}}
    )
    assert response.status_code == 422


def test_equilibrium_check(client: TestClient, two_agent_spec):
    body = {"instance": two_agent_spec, "q": 0.8, "profile": [0.625, 0.9375]}
    response = client.post("/api/v1/equilibrium/check", json=body)
    assert response.status_code == 200

    payload = response.json()["payload"]
    assert payload["ok"] is True
    assert payload["sender_preferred_welfare"] == pytest.approx(0.3)


def test_equilibrium_check_needs_one_profile(client: TestClient, two_agent_spec):
    body = {
        "instance": two_agent_spec,
        "q": 0.8,
        "profile": [1.0, 0.0],
        "threshold": 1.0,
    }
    assert client.post("/api/v1/equilibrium/check", json=body).status_code == 422
