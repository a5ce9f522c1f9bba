"""
Equilibria of the move/stay game under a common belief.

Every agent holds the same belief q that the good state is realised and
chooses a probability of moving. Expected shares are computed exactly
from the Poisson-binomial law of the number of other movers.
"""

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from monitoring.logging.config import get_logger

from .config import DEFAULT_TOLERANCES
from .errors import ContractError, DomainViolation, InputError, InstanceStructureError
from .model import Instance, check_structure, threshold_welfare

logger = get_logger("persuasion_toolkit.equilibrium")


class StrategyProfile(BaseModel):
    """Move probabilities of agents 1..N under common belief q"""

    model_config = ConfigDict(frozen=True)

    probs: Tuple[float, ...] = Field(description="Probability that each agent moves")
    belief: float = Field(
        ge=0.0, le=1.0, description="Common belief that the good state holds"
    )

    @field_validator("probs")
    @classmethod
    def _in_unit_interval(cls, v: Tuple[float, ...]) -> Tuple[float, ...]:
        if any(not 0.0 <= p <= 1.0 for p in v):
            raise ValueError("move probabilities must lie in [0, 1]")
        return v

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.probs, dtype=float)

    @property
    def movers(self) -> List[int]:
        return [i + 1 for i, p in enumerate(self.probs) if p == 1.0]

    @property
    def mixers(self) -> List[int]:
        return [i + 1 for i, p in enumerate(self.probs) if 0.0 < p < 1.0]


class ThresholdProfile(BaseModel):
    """Agents below ceil(t) move, agent ceil(t) moves w.p. t + 1 - ceil(t)"""

    model_config = ConfigDict(frozen=True)

    t: float = Field(ge=0.0)

    def to_profile(self, n_agents: int, belief: float) -> StrategyProfile:
        return threshold_profile(n_agents, self.t, belief)


def threshold_profile(n_agents: int, t: float, belief: float) -> StrategyProfile:
    """StrategyProfile induced by threshold t"""
    if not 0.0 <= t <= n_agents:
        raise InputError(f"threshold {t} outside [0, {n_agents}]")
    probs = np.zeros(n_agents)
    top = int(np.ceil(t))
    probs[: max(top - 1, 0)] = 1.0
    if top >= 1:
        probs[top - 1] = t + 1 - top
    return StrategyProfile(probs=tuple(float(p) for p in probs), belief=belief)


def poisson_binomial_pmf(probs: Sequence[float]) -> np.ndarray:
    """Law of the number of successes among independent Bernoulli(p_j).

    Returns an array of length len(probs) + 1.
    """
    pmf = np.zeros(len(probs) + 1)
    pmf[0] = 1.0
    for count, p in enumerate(probs, start=1):
        pmf[1 : count + 1] = pmf[1 : count + 1] * (1.0 - p) + pmf[:count] * p
        pmf[0] *= 1.0 - p
    return pmf


def _payoffs(inst: Instance, q: float) -> np.ndarray:
    return q * inst.F - inst.r


def underline_i(inst: Instance, q: float, tol: float = 0.0) -> int:
    """Largest i with q F(i) - r(i) > 0 (0 when there is none)"""
    check_structure(inst)
    hits = np.flatnonzero(_payoffs(inst, q) > tol)
    return int(hits.max()) if hits.size else 0


def overline_i(inst: Instance, q: float, tol: float = 0.0) -> int:
    """Largest i with q F(i) - r(i) >= 0"""
    check_structure(inst)
    hits = np.flatnonzero(_payoffs(inst, q) >= -tol)
    return int(hits.max()) if hits.size else 0


def is_threshold_equilibrium(inst: Instance, q: float, t: float) -> bool:
    if not 0.0 <= t <= inst.n_agents:
        raise InputError(f"threshold {t} outside [0, {inst.n_agents}]")
    return underline_i(inst, q) <= t <= overline_i(inst, q)


def _check_profile(inst: Instance, profile: StrategyProfile) -> None:
    check_structure(inst)
    if len(profile.probs) != inst.n_agents:
        raise InstanceStructureError(
            f"profile has {len(profile.probs)} entries for {inst.n_agents} agents"
        )


def move_utility(inst: Instance, profile: StrategyProfile, i: int) -> float:
    """q E[F(1 + movers among the others)] - r(i)"""
    _check_profile(inst, profile)
    if not 1 <= i <= inst.n_agents:
        raise InstanceStructureError(f"agent {i} outside 1..{inst.n_agents}")
    others = np.delete(profile.array, i - 1)
    pmf = poisson_binomial_pmf(others)
    share = float(pmf @ inst.F[1 : inst.n_agents + 1])
    return profile.belief * share - float(inst.r[i])


@dataclass
class EquilibriumReport:
    """Per-agent move utilities and the agents whose choice is not a best response"""

    utilities: List[float]
    deviators: List[int]
    tol: float

    @property
    def ok(self) -> bool:
        return not self.deviators

    def to_dict(self) -> dict:
        return {
            "utilities": self.utilities,
            "deviators": self.deviators,
            "tol": self.tol,
            "ok": self.ok,
        }


def equilibrium_report(
    inst: Instance,
    profile: StrategyProfile,
    tol: float = DEFAULT_TOLERANCES.indifference,
) -> EquilibriumReport:
    utilities, deviators = [], []
    for i, p in enumerate(profile.probs, start=1):
        u = move_utility(inst, profile, i)
        utilities.append(u)
        if p == 1.0:
            bad = u < -tol
        elif p == 0.0:
            bad = u > tol
        else:
            bad = abs(u) > tol
        if bad:
            deviators.append(i)
    return EquilibriumReport(utilities=utilities, deviators=deviators, tol=tol)


def is_equilibrium(
    inst: Instance,
    profile: StrategyProfile,
    tol: float = DEFAULT_TOLERANCES.indifference,
) -> bool:
    """Bayes-Nash condition: movers gain, stayers lose, mixers are indifferent"""
    return equilibrium_report(inst, profile, tol).ok


def profile_welfare(inst: Instance, profile: StrategyProfile) -> float:
    """q E[n F(n)] - sum_i p_i r(i), n the random number of movers"""
    _check_profile(inst, profile)
    n = inst.n_agents
    pmf = poisson_binomial_pmf(profile.array)
    counts = np.arange(n + 1)
    shared = float(pmf @ (counts * inst.F))
    return profile.belief * shared - float(profile.array @ inst.r[1 : n + 1])


def sender_preferred_welfare(inst: Instance, q: float) -> float:
    """Welfare of the threshold equilibrium at the lower threshold"""
    return threshold_welfare(inst, q, underline_i(inst, q))


def mixed_pair_solve(
    inst: Instance, q: float, i: int, j: int, background: Sequence[int]
) -> Optional[Tuple[float, float]]:
    """Mixed probabilities (p_i, p_j) making both agents indifferent.

    Args:
        inst: The game.
        q: Common belief.
        i, j: The two mixing agents, i < j.
        background: Pure action (0 or 1) of every agent; entries of i
            and j are ignored.

    Returns:
        (p_i, p_j) when both lie strictly inside (0, 1), otherwise None.
    """
    check_structure(inst)
    n = inst.n_agents
    if not 1 <= i < j <= n:
        raise ContractError(f"need 1 <= i < j <= {n}, got i={i}, j={j}")
    if len(background) != n:
        raise InstanceStructureError(
            f"background has {len(background)} entries for {n} agents"
        )
    others = [a for k, a in enumerate(background, start=1) if k not in (i, j)]
    if any(a not in (0, 1) for a in others):
        raise ContractError("background actions must be pure")
    m = int(sum(others))
    F, r = inst.F, inst.r
    denom = q * (F[m + 1] - F[m + 2])
    if denom == 0:
        raise DomainViolation(
            f"indifference equations are degenerate at {m} background movers"
        )
    # agent i is indifferent given p_j, and vice versa
    p_j = (q * F[m + 1] - r[i]) / denom
    p_i = (q * F[m + 1] - r[j]) / denom
    if 0.0 < p_i < 1.0 and 0.0 < p_j < 1.0:
        return float(p_i), float(p_j)
    return None
