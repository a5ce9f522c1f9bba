"""
Pytest Configuration
Shared fixtures and test configuration
"""

import numpy as np
import pytest
from fastapi.testclient import TestClient

from app.core.model import CostTable, Instance, SharingTable
from app.main import app
from app.services import job_service


@pytest.fixture
def client():
    """FastAPI test client fixture"""
    return TestClient(app)


@pytest.fixture(autouse=True)
def clean_jobs():
    """Each test starts with an empty job store"""
    job_service.jobs_storage.clear()
    yield
    job_service.jobs_storage.clear()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def two_agent_game():
    """N=2, F=(1, 1, 0.6), r=(0, 0.5, 0.6), prior 0.8.

    Social optimum i*=1 with value 0.4, fast-path bound r(2)/F(2) = 1.
    """
    return Instance(
        n_agents=2,
        prior1=0.8,
        sharing=SharingTable(values=(1.0, 1.0, 0.6)),
        costs=CostTable(values=(0.0, 0.5, 0.6)),
    )


@pytest.fixture
def two_agent_spec():
    """Request/file form of the two-agent game"""
    return {
        "n_agents": 2,
        "prior1": 0.8,
        "sharing": {"family": "table", "values": [1.0, 1.0, 0.6]},
        "costs": {"family": "table", "values": [0.0, 0.5, 0.6]},
    }


@pytest.fixture
def power_spec():
    """A benchmark-family instance in file form"""
    return {
        "n_agents": 5,
        "prior1": 0.8,
        "sharing": {"family": "power", "alpha": 0.5},
        "costs": {"family": "constant", "coeff": 0.5},
    }
