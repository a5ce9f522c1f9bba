"""
Optimal private signaling.

The optimal private mechanism is found over the marginal table p[i, k]:
the probability, given the good state, that exactly k agents are told to
move and agent i is one of them. The table has N^2 entries and the
persuasiveness and realisability conditions are linear in it, so the
design problem is a polynomial-size LP. In the bad state every agent is
told to stay.

Usage:
    mech = fast_path(inst) or solve_private(inst)
    report = verify_persuasive_marginals(inst, mech.marginals)
"""

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from monitoring.logging.config import get_logger

from .config import DEFAULT_TOLERANCES, Relation
from .document import MechanismDocument, finite_or_none
from .errors import InfeasibleError, InputError, SolverError, TrivialMechanismSignal
from .lp_core import Constraint, LinearProgram, solve_lp
from .model import Instance, check_structure, social_optimum, welfare_count

logger = get_logger("persuasion_toolkit.private_design")


def marginal_index(n_agents: int, agent: int, size: int) -> int:
    """Position of p[agent, size] in the LP variable vector (both 1-based)"""
    return (agent - 1) * n_agents + (size - 1)


@dataclass
class PrivateMechanism:
    """Marginal table of a private mechanism and its expected welfare.

    Rows are agents 1..N and columns set sizes 1..N (0-indexed arrays).
    """

    marginals: np.ndarray
    objective: float
    fast_path: bool = False
    _size_dist: Optional[np.ndarray] = field(default=None, init=False, repr=False)

    @property
    def n_agents(self) -> int:
        return int(self.marginals.shape[0])

    @property
    def size_dist(self) -> np.ndarray:
        """q[0..N]: q_k = sum_i p[i, k] / k and q_0 = 1 - sum of the rest"""
        if self._size_dist is None:
            sizes = np.arange(1, self.n_agents + 1, dtype=float)
            q = self.marginals.sum(axis=0) / sizes
            self._size_dist = np.concatenate([[1.0 - q.sum()], q])
        return self._size_dist

    @property
    def cond_marginals(self) -> np.ndarray:
        """q[i, k] = p[i, k] / q_k, zero in columns the mechanism never uses"""
        q = self.size_dist[1:]
        out = np.zeros_like(self.marginals)
        used = q > 0
        out[:, used] = self.marginals[:, used] / q[used]
        return out

    def to_document(self, inst: Instance) -> MechanismDocument:
        return MechanismDocument(
            kind="private_mechanism",
            fingerprint=inst.fingerprint(),
            payload={
                "n_agents": self.n_agents,
                "prior1": inst.prior1,
                "objective": self.objective,
                "fast_path": self.fast_path,
                "marginals": self.marginals.tolist(),
                "size_dist": self.size_dist.tolist(),
            },
        )

    @classmethod
    def zero(cls, n_agents: int) -> "PrivateMechanism":
        """Everyone stays in every state"""
        return cls(marginals=np.zeros((n_agents, n_agents)), objective=0.0)


def _gains(inst: Instance) -> np.ndarray:
    """g[i-1, k-1] = F(k) - r(i)"""
    n = inst.n_agents
    return inst.F[1 : n + 1][None, :] - inst.r[1 : n + 1][:, None]


def build_lp2(inst: Instance) -> LinearProgram:
    """LP over the marginal table: N move rows, N stay rows, one
    cardinality row and N^2 matroid rows.

    Raises:
        TrivialMechanismSignal: the prior puts no mass on the good state.
    """
    check_structure(inst)
    if inst.prior1 == 0:
        raise TrivialMechanismSignal(
            "prior1 is zero, the all-stay mechanism is optimal"
        )

    n = inst.n_agents
    F, r = inst.F, inst.r
    gains = _gains(inst)
    sizes = np.arange(1, n + 1, dtype=float)
    names = [f"p_{i}_{k}" for i in range(1, n + 1) for k in range(1, n + 1)]
    lp = LinearProgram(objective=gains.ravel().copy(), variable_names=names)

    # a recommended mover must not prefer to stay
    for i in range(1, n + 1):
        idx = np.arange(marginal_index(n, i, 1), marginal_index(n, i, n) + 1)
        lp.add(
            Constraint(
                indices=idx,
                values=gains[i - 1].copy(),
                relation=Relation.GE,
                bound=0.0,
                name=f"move_{i}",
            )
        )

    # a recommended stayer must not prefer to move: one extra mover joins each set
    # F(k+1) only exists for k <= N-1; a set of size N leaves nobody to stay
    next_share = np.zeros(n)
    next_share[: n - 1] = F[2 : n + 1]
    ratio = inst.prior0 / inst.prior1
    for i in range(1, n + 1):
        ri = r[i]
        own = np.where(sizes <= n - 1, next_share - ri, 0.0)
        per_size = (own - (F[1] - ri)) / sizes
        coeffs = np.tile(per_size, n)
        coeffs[marginal_index(n, i, 1) : marginal_index(n, i, n) + 1] -= own
        rhs = ratio * ri - (F[1] - ri)
        lp.add(Constraint.dense(coeffs, Relation.LE, rhs, name=f"stay_{i}"))

    cardinality = np.tile(1.0 / sizes, n)
    lp.add(Constraint.dense(cardinality, Relation.LE, 1.0, name="cardinality"))

    # k p[i, k] <= sum_j p[j, k]
    for i in range(1, n + 1):
        for k in range(1, n + 1):
            coeffs = np.zeros(n * n)
            coeffs[k - 1 :: n] = -1.0
            coeffs[marginal_index(n, i, k)] += k
            lp.add(Constraint.dense(coeffs, Relation.LE, 0.0, name=f"matroid_{i}_{k}"))
    return lp


def solve_private(inst: Instance, method: Optional[str] = None) -> PrivateMechanism:
    """Optimal private mechanism from the marginal LP"""
    check_structure(inst)
    n = inst.n_agents
    try:
        lp = build_lp2(inst)
    except TrivialMechanismSignal:
        logger.info("prior1 is zero, returning the all-stay mechanism")
        return PrivateMechanism.zero(n)

    try:
        solution = solve_lp(lp, method=method)
    except InfeasibleError as e:
        # the all-zero table is always feasible
        raise SolverError(f"marginal LP reported infeasible: {e}") from e

    p = np.clip(solution.values, 0.0, None).reshape(n, n)
    objective = inst.prior1 * float(np.sum(p * _gains(inst)))
    logger.debug(f"private optimum {objective:.12g} for N={n}, prior1={inst.prior1}")
    return PrivateMechanism(marginals=p, objective=objective)


def persuasion_bound(inst: Instance) -> float:
    """r(i*+1) / F(i*+1), or infinity when i* = N"""
    i_star, _ = social_optimum(inst)
    if i_star >= inst.n_agents:
        return math.inf
    return float(inst.r[i_star + 1] / inst.F[i_star + 1])


def fast_path(inst: Instance) -> Optional[PrivateMechanism]:
    """Recommend the i* cheapest agents to move whenever the prior allows it.

    Returns None when the prior exceeds the persuasion bound.
    """
    check_structure(inst)
    bound = persuasion_bound(inst)
    if inst.prior1 > bound:
        logger.info(f"fast path rejected: prior1 {inst.prior1} above bound {bound:.6g}")
        return None
    i_star, _ = social_optimum(inst)
    n = inst.n_agents
    p = np.zeros((n, n))
    if i_star > 0:
        p[:i_star, i_star - 1] = 1.0
    objective = inst.prior1 * welfare_count(inst, i_star)
    return PrivateMechanism(marginals=p, objective=objective, fast_path=True)


@dataclass
class MarginalReport:
    """Worst violation of each constraint family, 0 when satisfied"""

    nonnegativity: float
    move: float
    stay: float
    cardinality: float
    matroid: float
    tol: float

    @property
    def worst(self) -> float:
        return max(
            self.nonnegativity, self.move, self.stay, self.cardinality, self.matroid
        )

    @property
    def ok(self) -> bool:
        return self.worst <= self.tol

    def to_dict(self) -> dict:
        return {
            "nonnegativity": self.nonnegativity,
            "move": self.move,
            "stay": self.stay,
            "cardinality": self.cardinality,
            "matroid": self.matroid,
            "tol": self.tol,
            "ok": self.ok,
        }


def verify_persuasive_marginals(
    inst: Instance, p: np.ndarray, tol: float = DEFAULT_TOLERANCES.verification
) -> MarginalReport:
    """Check persuasiveness and realisability of a marginal table.

    Args:
        inst: The game.
        p: N x N table, rows agents, columns set sizes.
        tol: Violations up to this amount count as satisfied.

    Returns:
        A MarginalReport with the worst violation of each family.
    """
    check_structure(inst)
    n = inst.n_agents
    p = np.asarray(p, dtype=float)
    if p.shape != (n, n):
        raise InputError(f"marginal table has shape {p.shape}, expected {(n, n)}")
    F, r = inst.F, inst.r
    sizes = np.arange(1, n + 1, dtype=float)
    gains = _gains(inst)

    col = p.sum(axis=0)
    q = col / sizes
    q0 = 1.0 - q.sum()

    move = float(np.max(np.maximum(0.0, -(p * gains).sum(axis=1)), initial=0.0))

    stay = 0.0
    if inst.prior1 > 0:
        ri = r[1 : n + 1]
        # sizes 1..N-1 only: a stayer facing k movers would join as number k+1
        shares = F[2 : n + 1]
        others = q[: n - 1][None, :] - p[:, : n - 1]
        lhs = (others * (shares[None, :] - ri[:, None])).sum(axis=1)
        lhs = lhs + q0 * (F[1] - ri)
        rhs = inst.prior0 / inst.prior1 * ri
        stay = float(np.max(np.maximum(0.0, lhs - rhs), initial=0.0))

    cardinality = max(0.0, float(q.sum()) - 1.0)
    excess = sizes[None, :] * p - col[None, :]
    matroid = float(np.max(np.maximum(0.0, excess), initial=0.0))
    nonneg = float(np.max(np.maximum(0.0, -p), initial=0.0))
    return MarginalReport(
        nonnegativity=nonneg,
        move=move,
        stay=stay,
        cardinality=cardinality,
        matroid=matroid,
        tol=tol,
    )


def bound_document(inst: Instance) -> MechanismDocument:
    """Fast-path bound and social optimum of an instance"""
    i_star, value = social_optimum(inst)
    return MechanismDocument(
        kind="persuasion_bound",
        fingerprint=inst.fingerprint(),
        payload={
            "i_star": i_star,
            "social_optimum": value,
            "bound": finite_or_none(persuasion_bound(inst)),
        },
    )
