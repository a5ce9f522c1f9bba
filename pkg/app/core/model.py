"""
Game primitives and welfare functions.

An instance holds N agents ordered by moving cost, the prior probability
that the resource at the second location is available, the sharing
function F(0..N) and the cost schedule r(0..N). Both tables are stored
tabulated so arbitrary sharing functions are supported; the builders
below produce the power-law sharing family and the three cost families
used by the benchmark sweeps.

Usage:
    inst = power_instance(n_agents=20, prior1=0.8, alpha=0.8,
                          cost_family="constant", coeff=0.1)
    report = validate_instance(inst)
    i_star, value = social_optimum(inst)
"""

import hashlib
from dataclasses import dataclass, field
from typing import Annotated, Iterable, List, Literal, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from .config import DEFAULT_TOLERANCES, CostFamily
from .errors import DomainViolation, InputError, InstanceStructureError

# Cost family multipliers: r(i) = scale * coeff * i^power
_COST_FAMILIES = {
    CostFamily.CONSTANT: (0.5, 0),
    CostFamily.LINEAR: (0.1, 1),
    CostFamily.QUADRATIC: (0.02, 2),
}


class SharingTable(BaseModel):
    """Sharing function F(0..N); F(0) repeats F(1) by convention"""

    model_config = ConfigDict(frozen=True)

    values: Tuple[float, ...]

    @field_validator("values")
    @classmethod
    def _positive(cls, v: Tuple[float, ...]) -> Tuple[float, ...]:
        if any(x <= 0 for x in v):
            raise ValueError("sharing values must be positive")
        return v

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=float)


class CostTable(BaseModel):
    """Moving costs r(0..N) with r(0) = 0"""

    model_config = ConfigDict(frozen=True)

    values: Tuple[float, ...]

    @field_validator("values")
    @classmethod
    def _nonnegative(cls, v: Tuple[float, ...]) -> Tuple[float, ...]:
        if any(x < 0 for x in v):
            raise ValueError("costs must be nonnegative")
        return v

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=float)


class Instance(BaseModel):
    """The resource competition game. Immutable after construction."""

    model_config = ConfigDict(frozen=True)

    n_agents: int = Field(ge=1, description="Number of agents N")
    prior1: float = Field(
        ge=0.0, le=1.0, description="Prior probability of the good state"
    )
    sharing: SharingTable
    costs: CostTable

    @property
    def prior0(self) -> float:
        return 1.0 - self.prior1

    @property
    def F(self) -> np.ndarray:
        return self.sharing.array

    @property
    def r(self) -> np.ndarray:
        return self.costs.array

    def with_prior(self, prior1: float) -> "Instance":
        """Same game under another prior"""
        return Instance(
            n_agents=self.n_agents,
            prior1=prior1,
            sharing=self.sharing,
            costs=self.costs,
        )

    def fingerprint(self) -> str:
        """sha256 of the canonical JSON form, carried by every output document"""
        return hashlib.sha256(self.model_dump_json().encode("utf-8")).hexdigest()


# --- Instance file schema -------------------------------------------------


class PowerSharingSpec(BaseModel):
    family: Literal["power"]
    alpha: float = Field(ge=0.0)


class TableSharingSpec(BaseModel):
    family: Literal["table"]
    values: List[float]


class FamilyCostSpec(BaseModel):
    family: Literal["constant", "linear", "quadratic"]
    coeff: float = Field(ge=0.0)


class TableCostSpec(BaseModel):
    family: Literal["table"]
    values: List[float]


SharingSpec = Annotated[
    Union[PowerSharingSpec, TableSharingSpec], Field(discriminator="family")
]
CostSpec = Annotated[
    Union[FamilyCostSpec, TableCostSpec], Field(discriminator="family")
]


class InstanceSpec(BaseModel):
    """Instance file contents: generator parameters or explicit tables"""

    n_agents: int = Field(ge=1)
    prior1: float = Field(ge=0.0, le=1.0)
    sharing: SharingSpec
    costs: CostSpec

    def build(self) -> Instance:
        if isinstance(self.sharing, PowerSharingSpec):
            sharing = power_sharing(self.sharing.alpha, self.n_agents)
        else:
            sharing = SharingTable(values=tuple(self.sharing.values))
        if isinstance(self.costs, FamilyCostSpec):
            costs = cost_table(self.costs.family, self.costs.coeff, self.n_agents)
        else:
            costs = CostTable(values=tuple(self.costs.values))
        return Instance(
            n_agents=self.n_agents, prior1=self.prior1, sharing=sharing, costs=costs
        )


# --- Builders -------------------------------------------------------------


def power_sharing(alpha: float, n_agents: int) -> SharingTable:
    """F(i) = i^{-alpha} for i >= 1, with F(0) = F(1) = 1"""
    idx = np.arange(n_agents + 1, dtype=float)
    idx[0] = 1.0
    return SharingTable(values=tuple(float(x) for x in idx ** (-alpha)))


def cost_table(
    family: Union[str, CostFamily], coeff: float, n_agents: int
) -> CostTable:
    """Constant 0.5c, linear 0.1ci or quadratic 0.02ci^2 costs, r(0) = 0"""
    family = CostFamily(family)
    if family not in _COST_FAMILIES:
        raise InputError(f"cost family '{family.value}' needs explicit values")
    scale, power = _COST_FAMILIES[family]
    idx = np.arange(n_agents + 1, dtype=float)
    values = scale * coeff * idx**power
    values[0] = 0.0
    return CostTable(values=tuple(float(x) for x in values))


def power_instance(
    n_agents: int,
    prior1: float,
    alpha: float,
    cost_family: Union[str, CostFamily],
    coeff: float,
) -> Instance:
    """Instance from the benchmark families"""
    return Instance(
        n_agents=n_agents,
        prior1=prior1,
        sharing=power_sharing(alpha, n_agents),
        costs=cost_table(cost_family, coeff, n_agents),
    )


def random_instance(
    rng: np.random.Generator, n_agents: int, prior1: Optional[float] = None
) -> Instance:
    """Random valid instance: power-law sharing and sorted uniform costs"""
    alpha = rng.uniform(0.1, 0.95)
    costs = np.concatenate([[0.0], np.sort(rng.uniform(0.02, 0.8, size=n_agents))])
    if prior1 is None:
        prior1 = float(rng.uniform(0.05, 0.95))
    return Instance(
        n_agents=n_agents,
        prior1=prior1,
        sharing=power_sharing(alpha, n_agents),
        costs=CostTable(values=tuple(float(x) for x in costs)),
    )


# --- Validation -----------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    """One violated structural assumption"""

    clause: str
    index: int
    message: str


@dataclass
class ValidationReport:
    violations: List[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def messages(self) -> List[str]:
        return [v.message for v in self.violations]


def check_structure(inst: Instance) -> None:
    """Raise if the tables do not cover indices 0..N"""
    expected = inst.n_agents + 1
    if len(inst.sharing.values) != expected:
        raise InstanceStructureError(
            f"sharing table has {len(inst.sharing.values)} entries, expected {expected}"
        )
    if len(inst.costs.values) != expected:
        raise InstanceStructureError(
            f"cost table has {len(inst.costs.values)} entries, expected {expected}"
        )


def validate_instance(
    inst: Instance, rtol: float = DEFAULT_TOLERANCES.assumption_rtol
) -> ValidationReport:
    """Report every violated monotonicity / convexity / concavity condition.

    Raises:
        InstanceStructureError: the tables do not have N+1 entries.
    """
    check_structure(inst)
    F, r, n = inst.F, inst.r, inst.n_agents
    G = np.arange(n + 1) * F
    magnitude = max(np.max(np.abs(F)), np.max(np.abs(r)), np.max(G))
    scale = rtol * max(1.0, float(magnitude))
    report = ValidationReport()

    def flag(clause: str, index: int, message: str) -> None:
        report.violations.append(Violation(clause=clause, index=index, message=message))

    if abs(F[0] - F[1]) > scale:
        flag("F(0)=F(1)", 0, "F(0) differs from F(1)")
    for k in range(1, n):
        if F[k + 1] > F[k] + scale:
            flag("F decreasing", k, f"F not decreasing at n={k}")
    for k in range(1, n - 1):
        if (F[k + 2] - F[k + 1]) < (F[k + 1] - F[k]) - scale:
            flag("F convex", k + 1, f"F not convex at n={k + 1}")
    for k in range(n):
        if G[k + 1] < G[k] - scale:
            flag("nF(n) increasing", k, f"nF(n) not increasing at n={k}→{k + 1}")
    for k in range(1, n):
        if G[k + 1] - 2 * G[k] + G[k - 1] > scale:
            flag("nF(n) concave", k, f"nF(n) not concave at n={k}")
    if r[0] != 0:
        flag("r(0)=0", 0, "r(0) is not zero")
    for k in range(1, n):
        if r[k + 1] < r[k] - scale:
            flag("r nondecreasing", k, f"r not nondecreasing at n={k}")
    return report


def require_valid(inst: Instance) -> None:
    """Raise DomainViolation unless the instance satisfies every assumption"""
    report = validate_instance(inst)
    if not report.ok:
        raise DomainViolation("invalid instance: " + "; ".join(report.messages()))


# --- Welfare --------------------------------------------------------------


def cumulative_costs(inst: Instance) -> np.ndarray:
    """C[n] = r(1) + ... + r(n), C[0] = 0"""
    return np.cumsum(inst.r)


def _check_count(inst: Instance, n: int) -> None:
    if not 0 <= n <= inst.n_agents:
        raise InstanceStructureError(f"agent count {n} outside 0..{inst.n_agents}")


def _check_belief(q: float) -> None:
    if not 0.0 <= q <= 1.0:
        raise InputError(f"belief {q} outside [0, 1]")


def welfare_of_set(inst: Instance, theta: int, s: Iterable[int]) -> float:
    """W(theta, S) = theta |S| F(|S|) - sum of r(i) over S, agents labelled 1..N"""
    if theta not in (0, 1):
        raise InputError(f"state must be 0 or 1, got {theta}")
    members = set(s)
    for i in members:
        if not 1 <= i <= inst.n_agents:
            raise InstanceStructureError(f"agent {i} outside 1..{inst.n_agents}")
    size = len(members)
    r = inst.r
    return float(theta * size * inst.F[size] - sum(r[i] for i in members))


def welfare_count(inst: Instance, n: int) -> float:
    """W~(n) = n F(n) - C(n): the good state with the n cheapest agents moving"""
    _check_count(inst, n)
    return float(n * inst.F[n] - cumulative_costs(inst)[n])


def threshold_welfare(inst: Instance, q: float, n: int) -> float:
    """W(q, n) = q n F(n) - C(n)"""
    _check_belief(q)
    _check_count(inst, n)
    return float(q * n * inst.F[n] - cumulative_costs(inst)[n])


def social_optimum(inst: Instance, tol: float = 1e-12) -> Tuple[int, float]:
    """Largest maximizer i* of W~ and the ceiling prior1 * W~(i*).

    W~ is concave, so its first differences are nonincreasing and i* is the
    last index with a nonnegative difference; found by binary search.
    """
    F, C = inst.F, cumulative_costs(inst)

    def gain(n: int) -> float:
        return n * F[n] - C[n] - ((n - 1) * F[n - 1] - C[n - 1])

    lo, hi = 0, inst.n_agents
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if gain(mid) >= -tol:
            lo = mid
        else:
            hi = mid - 1
    return lo, inst.prior1 * welfare_count(inst, lo)
