"""
Recommendation-set sampling.

A private mechanism is stored as its marginal table; to actually send
recommendations a concrete set of movers has to be drawn. The draw has
two stages: a set size k from the size distribution q, then a set of
exactly k agents whose inclusion probabilities are the conditional
marginals q[i, k]. The second stage is a sequential elimination: starting
from every agent with positive weight, one agent is removed per step
until k remain, with removal probabilities chosen so that the survivors
hit the target inclusion probabilities.

Random stream order (fixed, so seeded runs are reproducible):
    1. one uniform per draw for the set size;
    2. for each size k in increasing order, for each elimination step
       from the largest pool down, one uniform per draw of that size.
A single draw therefore consumes one size uniform followed by one
uniform per elimination step.
"""

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from monitoring.logging.config import get_logger

from .config import DEFAULT_TOLERANCES
from .errors import ContractError, InvalidMarginalsError
from .private_design import PrivateMechanism

logger = get_logger("persuasion_toolkit.move_sampler")

# entries this close to one are pinned exactly
_PIN_SLACK = 1e-12

AgentSet = Tuple[int, ...]


@dataclass(frozen=True)
class EliminationStep:
    """One elimination step, taking the pool from n+1 agents down to n.

    `pi` and `elim_probs` are indexed over the support of the column; only
    entries of agents still in the pool are used at draw time.
    """

    n: int
    pi: np.ndarray
    elim_probs: np.ndarray


@dataclass(frozen=True)
class SamplingSchedule:
    """Precomputed elimination table of one column for target size k"""

    support: np.ndarray  # 0-based agent indices with positive weight
    k: int
    steps: Tuple[EliminationStep, ...]

    @property
    def inclusion(self) -> np.ndarray:
        """Target inclusion probabilities over the support"""
        if not self.steps:
            return np.ones(self.support.size)
        return self.steps[-1].pi


def capped_inclusion(weights: Sequence[float], n: int) -> np.ndarray:
    """Inclusion probabilities of a size-n design proportional to weights.

    Entries that would exceed one are pinned to one and the remaining
    mass n - (#pinned) is spread proportionally over the rest, repeated
    until nothing exceeds one. Zero weights map to zero.

    Raises:
        InvalidMarginalsError: fewer than n positive weights.
        ContractError: negative weights or n < 0.
    """
    w = np.asarray(weights, dtype=float)
    if n < 0:
        raise ContractError(f"sample size {n} is negative")
    if np.any(w < 0):
        raise ContractError("weights must be nonnegative")
    positive = w > 0
    if positive.sum() < n:
        raise InvalidMarginalsError(
            f"only {int(positive.sum())} positive weights for a sample of size {n}"
        )

    pi = np.zeros_like(w)
    pinned = np.zeros(w.shape, dtype=bool)
    for _ in range(w.size + 1):
        free = positive & ~pinned
        remaining = n - int(pinned.sum())
        total = w[free].sum()
        if remaining <= 0 or total <= 0:
            pi[free] = 0.0
            break
        pi[free] = remaining * w[free] / total
        new_pins = free & (pi >= 1.0 - _PIN_SLACK)
        if not new_pins.any():
            break
        pinned |= new_pins
        pi[pinned] = 1.0
    else:
        raise InvalidMarginalsError("capping did not converge")
    return pi


def elimination_probs(
    pi_now: np.ndarray, pi_prev: Optional[np.ndarray] = None
) -> np.ndarray:
    """Removal probabilities of one step over the current pool.

    With pi_prev absent this is the first step (pool of size n+1 where
    every agent was included with probability one): r = 1 - pi_now.
    Otherwise r = 1 - pi_now / pi_prev.
    """
    pi_now = np.asarray(pi_now, dtype=float)
    if pi_prev is None:
        if np.isclose(pi_now.sum(), pi_now.size):
            raise ContractError("pool is already at the target size")
        r = 1.0 - pi_now
    else:
        pi_prev = np.asarray(pi_prev, dtype=float)
        gone = pi_prev <= 0
        if np.any(gone & (pi_now > 0)):
            raise ContractError(
                "agent with zero inclusion probability is still in the pool"
            )
        # agents already out of the pool keep r = 0
        r = np.where(gone, 0.0, 1.0 - pi_now / np.where(gone, 1.0, pi_prev))
    # round-off on pinned entries
    return np.clip(r, 0.0, 1.0)


def sampling_schedule(weights: Sequence[float], k: int) -> SamplingSchedule:
    """Elimination table for drawing k agents with probabilities
    proportional to `weights` (capped at one)."""
    w = np.asarray(weights, dtype=float)
    support = np.flatnonzero(w > 0)
    if support.size < k:
        raise InvalidMarginalsError(
            f"support of size {support.size} is smaller than the set size {k}"
        )
    ws = w[support]
    steps: List[EliminationStep] = []
    pi_prev: Optional[np.ndarray] = None
    for n in range(support.size - 1, k - 1, -1):
        pi_now = capped_inclusion(ws, n)
        elim = elimination_probs(pi_now, pi_prev)
        steps.append(EliminationStep(n=n, pi=pi_now, elim_probs=elim))
        pi_prev = pi_now
    return SamplingSchedule(support=support, k=k, steps=tuple(steps))


def _eliminate(
    schedule: SamplingSchedule, rng: np.random.Generator, count: int
) -> np.ndarray:
    """Run the elimination for `count` independent draws; returns the
    count x |support| survivor matrix"""
    alive = np.ones((count, schedule.support.size), dtype=bool)
    rows = np.arange(count)
    for step in schedule.steps:
        u = rng.random(count)
        weights = np.where(alive, step.elim_probs[None, :], 0.0)
        cum = np.cumsum(weights, axis=1)
        if np.any(cum[:, -1] <= 0):
            raise InvalidMarginalsError(
                f"no agent can be eliminated at pool size {step.n + 1}"
            )
        target = u * cum[:, -1]
        # first position whose cumulative weight exceeds the target
        choice = (cum <= target[:, None]).sum(axis=1)
        alive[rows, choice] = False
    return alive


def tille_sample(
    weights: Sequence[float], k: int, rng: np.random.Generator
) -> AgentSet:
    """Draw exactly k agents (1-based labels, sorted) with inclusion
    probabilities k w_i / sum(w), capped at one"""
    schedule = sampling_schedule(weights, k)
    alive = _eliminate(schedule, rng, 1)[0]
    return tuple(int(a) + 1 for a in schedule.support[alive])


def checked_size_dist(
    mech: PrivateMechanism, clamp: float = DEFAULT_TOLERANCES.size_clamp
) -> np.ndarray:
    """Size distribution with q_0 clamped into [0, 1] and renormalised.

    Raises:
        InvalidMarginalsError: q_0 below -clamp or negative marginals.
    """
    if np.any(mech.marginals < -clamp):
        raise InvalidMarginalsError("marginal table has negative entries")
    q = mech.size_dist.copy()
    if q[0] < -clamp:
        raise InvalidMarginalsError(f"size probabilities sum to {1.0 - q[0]:.12g} > 1")
    q = np.clip(q, 0.0, 1.0)
    return q / q.sum()


def column_schedule(
    mech: PrivateMechanism, k: int, tol: float = DEFAULT_TOLERANCES.renormalize
) -> SamplingSchedule:
    """Schedule for column k after the conditional-marginal guard.

    Conditional marginals may exceed one by at most `tol` (solver
    round-off); those are capped, anything larger is rejected.
    """
    column = np.clip(mech.marginals[:, k - 1], 0.0, None)
    total = column.sum()
    if total <= 0:
        raise InvalidMarginalsError(
            f"column {k} is empty but has positive size probability"
        )
    excess = float(np.max(k * column / total)) - 1.0
    if excess > tol:
        raise InvalidMarginalsError(
            f"conditional marginal of size {k} exceeds one by {excess:.3e}"
        )
    return sampling_schedule(column, k)


def sample_move_sets(
    mech: PrivateMechanism, rng: np.random.Generator, draws: int
) -> np.ndarray:
    """Draw `draws` recommendation sets for the good state.

    Returns:
        Boolean matrix, draws x N; entry [d, i-1] is True when agent i is
        told to move in draw d.
    """
    n = mech.n_agents
    q = checked_size_dist(mech)
    cdf = np.cumsum(q)
    sizes = np.minimum(np.searchsorted(cdf, rng.random(draws), side="right"), n)

    out = np.zeros((draws, n), dtype=bool)
    for k in range(1, n + 1):
        rows = np.flatnonzero(sizes == k)
        if rows.size == 0:
            continue
        schedule = column_schedule(mech, k)
        alive = _eliminate(schedule, rng, rows.size)
        members = np.zeros((rows.size, n), dtype=bool)
        members[:, schedule.support] = alive
        out[rows] = members
    mean_size = out.sum(axis=1).mean() if draws else 0.0
    logger.debug(f"sampled {draws} sets, mean size {mean_size:.4g}")
    return out


def sample_move_set(mech: PrivateMechanism, rng: np.random.Generator) -> AgentSet:
    """One recommendation set for the good state (empty tuple: everyone stays)"""
    row = sample_move_sets(mech, rng, 1)[0]
    return tuple(int(a) + 1 for a in np.flatnonzero(row))


def format_sets(members: np.ndarray) -> List[str]:
    """Text lines of sorted 1-based agent labels; "-" for the empty set"""
    lines = []
    for row in np.asarray(members, dtype=bool):
        agents = np.flatnonzero(row) + 1
        lines.append(" ".join(str(a) for a in agents) if agents.size else "-")
    return lines
