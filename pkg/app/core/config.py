"""
Configuration classes for the persuasion toolkit
"""

from enum import Enum

from pydantic import BaseModel, ConfigDict, Field


class CostFamily(str, Enum):
    CONSTANT = "constant"  # r(i) = 0.5 c
    LINEAR = "linear"  # r(i) = 0.1 c i
    QUADRATIC = "quadratic"  # r(i) = 0.02 c i^2
    TABLE = "table"


class Relation(str, Enum):
    LE = "<="
    GE = ">="
    EQ = "="


class Tolerances(BaseModel):
    """Numerical tolerances shared by solvers, verifiers and samplers"""

    model_config = ConfigDict(frozen=True)

    assumption_rtol: float = Field(
        default=1e-12,
        description="Relative tolerance of the structural assumption checks",
    )
    feasibility: float = Field(default=1e-8, description="LP feasibility tolerance")
    verification: float = Field(
        default=1e-7,
        description="Tolerance of persuasiveness and mechanism verification",
    )
    indifference: float = Field(
        default=1e-8, description="Equilibrium indifference tolerance"
    )
    support: float = Field(
        default=1e-9,
        description="Mass below which a public signal is treated as unused",
    )
    size_clamp: float = Field(
        default=1e-9, description="Slack allowed on the no-move probability q_0"
    )
    renormalize: float = Field(
        default=1e-7,
        description="Largest conditional-marginal excess repaired before sampling",
    )


class OracleLimits(BaseModel):
    """Agent-count caps of the exhaustive computations"""

    model_config = ConfigDict(frozen=True)

    lp1: int = Field(
        default=12, description="Exponential LP over all recommendation sets"
    )
    pure_enumeration: int = Field(
        default=16, description="Enumeration of pure strategy profiles"
    )
    sampler_tree: int = Field(
        default=8, description="Exact expansion of the elimination tree"
    )


DEFAULT_TOLERANCES = Tolerances()
DEFAULT_LIMITS = OracleLimits()
