"""
API Request Models
Pydantic models for validating incoming requests
"""

from typing import List, Optional

from pydantic import BaseModel, Field, model_validator

from app.core.bench import GridConfig
from app.core.model import InstanceSpec
from config.settings import settings


class InstanceRequest(BaseModel):
    """An instance given by generator parameters or explicit tables"""
    instance: InstanceSpec


class PrivateRequest(InstanceRequest):
    """Request model for the optimal private mechanism"""
    fast_path_only: Optional[bool] = False


class SampleRequest(InstanceRequest):
    """Request model for sampling recommendation sets"""
    seed: int = settings.DEFAULT_SEED
    draws: int = Field(default=1, ge=0, le=settings.MAX_SAMPLE_DRAWS)
    state: int = Field(default=1, ge=0, le=1)


class EquilibriumCheckRequest(InstanceRequest):
    """Request model for certifying a strategy profile"""
    q: float = Field(ge=0.0, le=1.0, description="Common belief")
    profile: Optional[List[float]] = None   # One move probability per agent
    threshold: Optional[float] = None       # Or the threshold of a threshold profile

    @model_validator(mode="after")
    def validate_profile_source(self):
        if (self.profile is None) == (self.threshold is None):
            raise ValueError("give exactly one of profile or threshold")
        return self


class BenchmarkRequest(BaseModel):
    """Request model for a welfare sweep; a bundled grid name or an inline grid"""
    grid_name: Optional[str] = None
    grid: Optional[GridConfig] = None
    absolute: Optional[bool] = False

    @model_validator(mode="after")
    def validate_grid_source(self):
        if (self.grid_name is None) == (self.grid is None):
            raise ValueError("give exactly one of grid_name or grid")
        return self
