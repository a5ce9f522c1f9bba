"""
Brute-force ground truth for small games.

Everything here enumerates subsets of agents, encoded as bitmasks (bit
i-1 set when agent i is in the set), so it is exponential in N and capped
by OracleLimits. The results are used to cross-check the polynomial-size
computations in the other modules.
"""

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, Field

from monitoring.logging.config import get_logger

from .config import DEFAULT_LIMITS, DEFAULT_TOLERANCES, Relation
from .equilibrium import underline_i
from .errors import CapacityError, ContractError, InputError
from .lp_core import Constraint, LinearProgram, solve_lp
from .model import Instance, check_structure, random_instance, threshold_welfare
from .move_sampler import (
    capped_inclusion,
    checked_size_dist,
    column_schedule,
    sampling_schedule,
)
from .private_design import PrivateMechanism, solve_private

logger = get_logger("persuasion_toolkit.oracle")


def _capacity(n: int, cap: int, what: str) -> None:
    if n > cap:
        raise CapacityError(f"{what} supports at most {cap} agents, got {n}")


def subset_table(n_agents: int) -> Tuple[np.ndarray, np.ndarray]:
    """(membership[mask, i-1], size[mask]) for all 2^N masks"""
    masks = np.arange(1 << n_agents)
    members = ((masks[:, None] >> np.arange(n_agents)[None, :]) & 1).astype(bool)
    return members, members.sum(axis=1)


def mask_to_set(mask: int) -> Tuple[int, ...]:
    """Sorted 1-based agent labels of a bitmask"""
    return tuple(i + 1 for i in range(mask.bit_length()) if mask >> i & 1)


def set_to_mask(agents) -> int:
    mask = 0
    for a in agents:
        mask |= 1 << (a - 1)
    return mask


@dataclass
class FullMechanism:
    """Conditional distributions phi[theta, mask] over all recommendation sets"""

    cond: np.ndarray

    def __post_init__(self):
        self.cond = np.asarray(self.cond, dtype=float)
        if self.cond.ndim != 2 or self.cond.shape[0] != 2:
            raise InputError("a full mechanism needs one distribution per state")
        size = self.cond.shape[1]
        if size & (size - 1):
            raise InputError(f"{size} is not a number of subsets")
        if np.any(self.cond < -1e-12):
            raise InputError("set probabilities must be nonnegative")
        sums = self.cond.sum(axis=1)
        if np.any(np.abs(sums - 1.0) > 1e-10):
            raise InputError(f"state distributions sum to {sums.tolist()}, expected 1")

    @property
    def n_agents(self) -> int:
        return int(self.cond.shape[1]).bit_length() - 1

    @classmethod
    def from_sets(
        cls,
        n_agents: int,
        bad: Dict[Tuple[int, ...], float],
        good: Dict[Tuple[int, ...], float],
    ):
        """Build from {agent tuple: probability} maps for each state"""
        cond = np.zeros((2, 1 << n_agents))
        for theta, dist in ((0, bad), (1, good)):
            for agents, prob in dist.items():
                cond[theta, set_to_mask(agents)] += prob
        return cls(cond=cond)

    def joint(self, inst: Instance) -> np.ndarray:
        """phi(theta, S) = mu(theta) phi(S | theta)"""
        return self.cond * np.array([[inst.prior0], [inst.prior1]])


def set_welfare(inst: Instance) -> np.ndarray:
    """W[theta, mask] = theta |S| F(|S|) - sum of r(i) over S"""
    n = inst.n_agents
    members, sizes = subset_table(n)
    cost = members.astype(float) @ inst.r[1 : n + 1]
    return np.vstack([-cost, sizes * inst.F[sizes] - cost])


def full_objective(inst: Instance, phi: FullMechanism) -> float:
    return float(np.sum(phi.joint(inst) * set_welfare(inst)))


def _obedience_rows(inst: Instance) -> Tuple[np.ndarray, np.ndarray]:
    """Row coefficients over the joint weights (theta-major, then mask):
    move[i-1] must be >= 0 and stay[i-1] <= 0"""
    n = inst.n_agents
    members, sizes = subset_table(n)
    F, r = inst.F, inst.r
    share_in = F[sizes]
    # a stayer who deviates joins |S| movers; never happens when |S| = N
    share_out = F[np.minimum(sizes + 1, n)]
    move = np.zeros((n, 2, 1 << n))
    stay = np.zeros((n, 2, 1 << n))
    for i in range(1, n + 1):
        inside = members[:, i - 1]
        for theta in (0, 1):
            move[i - 1, theta] = np.where(inside, theta * share_in - r[i], 0.0)
            stay[i - 1, theta] = np.where(inside, 0.0, theta * share_out - r[i])
    return move.reshape(n, -1), stay.reshape(n, -1)


def solve_lp1(
    inst: Instance, method: Optional[str] = None
) -> Tuple[FullMechanism, float]:
    """Optimal persuasive mechanism over explicit recommendation sets.

    Raises:
        CapacityError: N above the LP1 cap.
    """
    check_structure(inst)
    n = inst.n_agents
    _capacity(n, DEFAULT_LIMITS.lp1, "the set-level LP")
    n_sets = 1 << n
    lp = LinearProgram(objective=set_welfare(inst).ravel().copy())
    move, stay = _obedience_rows(inst)
    for i in range(1, n + 1):
        lp.add(Constraint.dense(move[i - 1], Relation.GE, 0.0, name=f"move_{i}"))
        lp.add(Constraint.dense(stay[i - 1], Relation.LE, 0.0, name=f"stay_{i}"))
    for theta, mass in ((0, inst.prior0), (1, inst.prior1)):
        lp.add(
            Constraint(
                indices=np.arange(theta * n_sets, (theta + 1) * n_sets),
                values=np.ones(n_sets),
                relation=Relation.EQ,
                bound=mass,
                name=f"mass_{theta}",
            )
        )
    solution = solve_lp(lp, method=method)

    joint = np.clip(solution.values, 0.0, None).reshape(2, n_sets)
    cond = np.zeros_like(joint)
    for theta, mass in ((0, inst.prior0), (1, inst.prior1)):
        if mass > 0:
            cond[theta] = joint[theta] / joint[theta].sum()
        else:
            cond[theta, 0] = 1.0
    return FullMechanism(cond=cond), float(np.sum(joint * set_welfare(inst)))


@dataclass
class FullReport:
    move: np.ndarray
    stay: np.ndarray
    tol: float

    @property
    def worst(self) -> float:
        return float(max(self.move.max(initial=0.0), self.stay.max(initial=0.0)))

    @property
    def ok(self) -> bool:
        return self.worst <= self.tol


def verify_persuasive_full(
    inst: Instance, phi: FullMechanism, tol: float = DEFAULT_TOLERANCES.verification
) -> FullReport:
    """Per-agent violations of the move and stay obedience rows"""
    check_structure(inst)
    if phi.n_agents != inst.n_agents:
        raise InputError(
            f"mechanism covers {phi.n_agents} agents, instance has {inst.n_agents}"
        )
    joint = phi.joint(inst).ravel()
    move, stay = _obedience_rows(inst)
    return FullReport(
        move=np.maximum(0.0, -(move @ joint)),
        stay=np.maximum(0.0, stay @ joint),
        tol=tol,
    )


def normalize_mechanism(
    inst: Instance, phi: FullMechanism, tol: float = DEFAULT_TOLERANCES.verification
) -> FullMechanism:
    """Tell everyone to stay in the bad state, keep the good-state sets.

    Raises:
        ContractError: the input is not persuasive.
    """
    if not verify_persuasive_full(inst, phi, tol).ok:
        raise ContractError("only persuasive mechanisms can be normalised")
    cond = phi.cond.copy()
    cond[0] = 0.0
    cond[0, 0] = 1.0
    return FullMechanism(cond=cond)


def marginals_of_mechanism(phi: FullMechanism) -> np.ndarray:
    """p[i-1, k-1] = P(|S| = k and i in S | good state)"""
    n = phi.n_agents
    members, sizes = subset_table(n)
    p = np.zeros((n, n))
    good = phi.cond[1]
    for k in range(1, n + 1):
        at_k = sizes == k
        p[:, k - 1] = good[at_k] @ members[at_k]
    return p


def enumerate_pure_equilibria(
    inst: Instance, q: float, tol: float = 1e-9
) -> List[Tuple[int, ...]]:
    """All pure profiles (a_1..a_N) that are equilibria at belief q"""
    check_structure(inst)
    n = inst.n_agents
    _capacity(n, DEFAULT_LIMITS.pure_enumeration, "pure-profile enumeration")
    members, sizes = subset_table(n)
    others = sizes[:, None] - members.astype(int)
    utility = q * inst.F[np.minimum(others + 1, n)] - inst.r[1 : n + 1][None, :]
    stable = np.where(members, utility >= -tol, utility <= tol).all(axis=1)
    return [tuple(int(a) for a in members[m]) for m in np.flatnonzero(stable)]


def _tree(schedule, support_size: int) -> Dict[int, float]:
    """Exact law of the survivor set over support positions"""
    states = {(1 << support_size) - 1: 1.0}
    for step in schedule.steps:
        nxt: Dict[int, float] = {}
        for state, prob in states.items():
            alive = [j for j in range(support_size) if state >> j & 1]
            r = step.elim_probs[alive]
            total = r.sum()
            if total <= 0:
                raise ContractError(
                    f"no agent can be eliminated at pool size {step.n + 1}"
                )
            for j, rj in zip(alive, r):
                if rj > 0:
                    key = state & ~(1 << j)
                    nxt[key] = nxt.get(key, 0.0) + prob * rj / total
        states = nxt
    return states


def _to_agents(
    states: Dict[int, float],
    support: np.ndarray,
    scale: float,
    out: Dict[int, float],
) -> None:
    for state, prob in states.items():
        mask = 0
        for pos, agent in enumerate(support):
            if state >> pos & 1:
                mask |= 1 << int(agent)
        out[mask] = out.get(mask, 0.0) + scale * prob


def exact_sampler_distribution(
    p: Union[np.ndarray, PrivateMechanism], k: Optional[int] = None
) -> Dict[int, float]:
    """Exact distribution of sampled sets, as {mask: probability}.

    With a column and k: the law of the elimination draw of k agents.
    With a full marginal table (or mechanism): the law of the two-stage
    draw, the empty set included.
    """
    if isinstance(p, PrivateMechanism):
        mech = p
    else:
        arr = np.asarray(p, dtype=float)
        if arr.ndim == 1:
            if k is None:
                raise InputError("a single column needs its set size k")
            _capacity(arr.size, DEFAULT_LIMITS.sampler_tree, "the exact sampler tree")
            schedule = sampling_schedule(arr, k)
            out: Dict[int, float] = {}
            states = _tree(schedule, schedule.support.size)
            _to_agents(states, schedule.support, 1.0, out)
            return out
        mech = PrivateMechanism(marginals=arr, objective=0.0)

    n = mech.n_agents
    _capacity(n, DEFAULT_LIMITS.sampler_tree, "the exact sampler tree")
    q = checked_size_dist(mech)
    out = {0: float(q[0])}
    for size in range(1, n + 1):
        if q[size] <= 0:
            continue
        schedule = column_schedule(mech, size)
        states = _tree(schedule, schedule.support.size)
        _to_agents(states, schedule.support, float(q[size]), out)
    return out


def distribution_marginals(dist: Dict[int, float], n_agents: int) -> np.ndarray:
    """p[i-1, k-1] = P(|S| = k and i in S) of a set distribution"""
    p = np.zeros((n_agents, n_agents))
    for mask, prob in dist.items():
        agents = mask_to_set(mask)
        for a in agents:
            p[a - 1, len(agents) - 1] += prob
    return p


def random_marginals(
    rng: np.random.Generator, n_agents: int, zero_rate: float = 0.2
) -> np.ndarray:
    """Random realisable marginal table.

    Size probabilities (q_0 included) are Dirichlet; column k is q_k times
    a point of the k-uniform matroid polytope with some agents left out.
    """
    n = n_agents
    q = rng.dirichlet(np.ones(n + 1))
    p = np.zeros((n, n))
    for k in range(1, n + 1):
        weights = rng.uniform(0.05, 1.0, size=n)
        weights[rng.random(n) < zero_rate] = 0.0
        missing = k - np.count_nonzero(weights)
        if missing > 0:
            refill = rng.permutation(np.flatnonzero(weights == 0))[:missing]
            weights[refill] = rng.uniform(0.05, 1.0, size=refill.size)
        p[:, k - 1] = q[k] * capped_inclusion(weights, k)
    return p


class OracleCheck(BaseModel):
    """Outcome of one randomized cross-check"""

    name: str
    n_agents: int
    trials: int
    failures: int = 0
    worst: float = Field(default=0.0, description="Largest observed deviation")
    threshold: float
    details: List[str] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.failures == 0


def _log_check(check: OracleCheck) -> None:
    logger.info(
        f"{check.name} N={check.n_agents}: {check.failures}/{check.trials} failures, "
        f"worst {check.worst:.3e}"
    )


def check_lp_equivalence(
    rng: np.random.Generator, n_agents: int, trials: int, threshold: float = 1e-6
) -> OracleCheck:
    """Set-level optimum against prior1 times the marginal-table optimum"""
    check = OracleCheck(
        name="lp1-vs-lp2", n_agents=n_agents, trials=trials, threshold=threshold
    )
    for t in range(trials):
        inst = random_instance(rng, n_agents)
        _, full = solve_lp1(inst)
        gap = abs(full - solve_private(inst).objective)
        check.worst = max(check.worst, gap)
        if gap >= threshold:
            check.failures += 1
            check.details.append(
                f"trial {t}: gap {gap:.3e} at prior1={inst.prior1:.6g}"
            )
    _log_check(check)
    return check


def check_sampler(
    rng: np.random.Generator, n_agents: int, trials: int, threshold: float = 1e-10
) -> OracleCheck:
    """Exact sampler law against the marginal table it was built from"""
    check = OracleCheck(
        name="sampler", n_agents=n_agents, trials=trials, threshold=threshold
    )
    for t in range(trials):
        p = random_marginals(rng, n_agents)
        dist = exact_sampler_distribution(p)
        err = float(np.max(np.abs(distribution_marginals(dist, n_agents) - p)))
        check.worst = max(check.worst, err)
        if err >= threshold:
            check.failures += 1
            check.details.append(f"trial {t}: marginal error {err:.3e}")
    _log_check(check)
    return check


def check_threshold_welfare(
    rng: np.random.Generator,
    n_agents: int,
    trials: int,
    q_points: int = 21,
    threshold: float = 1e-9,
) -> OracleCheck:
    """Every pure equilibrium has at least the lower threshold of movers
    and no more welfare than the lower threshold equilibrium"""
    check = OracleCheck(
        name="threshold-welfare",
        n_agents=n_agents,
        trials=trials,
        threshold=threshold,
    )
    for t in range(trials):
        inst = random_instance(rng, n_agents)
        r = inst.r[1 : n_agents + 1]
        for q in np.linspace(0.0, 1.0, q_points):
            q = float(q)
            low = underline_i(inst, q)
            bound = threshold_welfare(inst, q, low)
            for profile in enumerate_pure_equilibria(inst, q):
                a = np.asarray(profile, dtype=float)
                count = int(a.sum())
                welfare = q * count * inst.F[count] - float(a @ r)
                excess = welfare - bound
                check.worst = max(check.worst, excess)
                if excess > threshold or count < low:
                    check.failures += 1
                    check.details.append(
                        f"trial {t}, q={q:.3f}: profile {profile} "
                        f"welfare {welfare:.6g} > {bound:.6g}"
                    )
    _log_check(check)
    return check
