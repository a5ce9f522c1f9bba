"""
Optimal public signaling over threshold recommendations.

A public mechanism announces one signal i in 0..N ("the i cheapest
agents move") to everybody. The decision variables are the joint weights
phi[theta, i] of state and signal; obedience of the announced threshold
is linear in them, giving an LP with 2(N+1) variables and 2(N+1) rows.
"""

from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from monitoring.logging.config import get_logger

from .config import DEFAULT_TOLERANCES, Relation
from .document import MechanismDocument
from .equilibrium import overline_i, sender_preferred_welfare, underline_i
from .errors import InfeasibleError, InputError, SolverError
from .lp_core import Constraint, LinearProgram, solve_lp
from .model import Instance, check_structure, cumulative_costs

logger = get_logger("persuasion_toolkit.public_design")


def signal_welfare(inst: Instance) -> np.ndarray:
    """W[theta, i]: -C(i) in the bad state, i F(i) - C(i) in the good state"""
    n = inst.n_agents
    C = cumulative_costs(inst)
    good = np.arange(n + 1) * inst.F - C
    return np.vstack([-C, good])


@dataclass
class PublicMechanism:
    """Joint weights phi[theta, i], theta in {0, 1}, signal i in 0..N"""

    weights: np.ndarray
    objective: float
    support_tol: float = DEFAULT_TOLERANCES.support

    @property
    def n_agents(self) -> int:
        return int(self.weights.shape[1]) - 1

    @property
    def masses(self) -> np.ndarray:
        return self.weights.sum(axis=0)

    @property
    def support(self) -> List[int]:
        """Signals sent with positive probability"""
        return [int(i) for i in np.flatnonzero(self.masses > self.support_tol)]

    @property
    def posteriors(self) -> List[Optional[float]]:
        """Belief in the good state after each signal; None for unused signals"""
        masses = self.masses
        return [
            float(self.weights[1, i] / masses[i]) if masses[i] > 0 else None
            for i in range(self.n_agents + 1)
        ]

    def to_document(self, inst: Instance) -> MechanismDocument:
        posteriors = self.posteriors
        rows = [
            {
                "theta": theta,
                "signal": i,
                "weight": float(self.weights[theta, i]),
                "posterior": posteriors[i],
            }
            for theta in (0, 1)
            for i in range(self.n_agents + 1)
        ]
        return MechanismDocument(
            kind="public_mechanism",
            fingerprint=inst.fingerprint(),
            payload={
                "n_agents": self.n_agents,
                "prior1": inst.prior1,
                "objective": self.objective,
                "support": self.support,
                "rows": rows,
            },
        )


def _var(n_agents: int, theta: int, i: int) -> int:
    return theta * (n_agents + 1) + i


def build_public_lp(inst: Instance) -> LinearProgram:
    check_structure(inst)
    n = inst.n_agents
    F, r = inst.F, inst.r
    names = [f"phi_{theta}_{i}" for theta in (0, 1) for i in range(n + 1)]
    objective = signal_welfare(inst).ravel().copy()
    lp = LinearProgram(objective=objective, variable_names=names)

    for i in range(1, n + 1):
        lp.add(
            Constraint(
                indices=np.array([_var(n, 1, i), _var(n, 0, i)]),
                values=np.array([F[i] - r[i], -r[i]]),
                relation=Relation.GE,
                bound=0.0,
                name=f"move_{i}",
            )
        )
    for i in range(n):
        lp.add(
            Constraint(
                indices=np.array([_var(n, 1, i), _var(n, 0, i)]),
                values=np.array([F[i + 1] - r[i + 1], -r[i + 1]]),
                relation=Relation.LE,
                bound=0.0,
                name=f"stay_{i}",
            )
        )
    for theta, mass in ((0, inst.prior0), (1, inst.prior1)):
        lp.add(
            Constraint(
                indices=np.arange(_var(n, theta, 0), _var(n, theta, n) + 1),
                values=np.ones(n + 1),
                relation=Relation.EQ,
                bound=mass,
                name=f"mass_{theta}",
            )
        )
    return lp


def solve_public(inst: Instance, method: Optional[str] = None) -> PublicMechanism:
    """Optimal public threshold mechanism (a vertex of the LP)"""
    lp = build_public_lp(inst)
    try:
        solution = solve_lp(lp, method=method)
    except InfeasibleError as e:
        # announcing the lower threshold at the prior is always feasible
        raise SolverError(f"public LP reported infeasible: {e}") from e
    if not solution.is_vertex:
        raise SolverError("public LP solution is not basic")

    n = inst.n_agents
    weights = np.clip(solution.values, 0.0, None).reshape(2, n + 1)
    objective = float(np.sum(weights * signal_welfare(inst)))
    mech = PublicMechanism(weights=weights, objective=objective)
    if len(mech.support) > 2:
        logger.warning(
            f"public optimum uses {len(mech.support)} signals: {mech.support}"
        )
    logger.debug(f"public optimum {mech.objective:.12g}, support {mech.support}")
    return mech


@dataclass
class SignalCheck:
    signal: int
    mass: float
    posterior: float
    move_violation: float
    stay_violation: float
    consistent: bool

    @property
    def ok(self) -> bool:
        return self.consistent


@dataclass
class PublicReport:
    """Obedience and equilibrium consistency of every used signal"""

    signals: List[SignalCheck] = field(default_factory=list)
    mass_violation: float = 0.0
    nonnegativity: float = 0.0
    tol: float = DEFAULT_TOLERANCES.verification

    @property
    def flagged(self) -> List[int]:
        return [s.signal for s in self.signals if not s.ok]

    @property
    def ok(self) -> bool:
        return (
            not self.flagged
            and self.mass_violation <= self.tol
            and self.nonnegativity <= self.tol
        )

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "flagged": self.flagged,
            "mass_violation": self.mass_violation,
            "nonnegativity": self.nonnegativity,
            "tol": self.tol,
            "signals": [s.__dict__ for s in self.signals],
        }


def verify_public(
    inst: Instance, mech: PublicMechanism, tol: float = DEFAULT_TOLERANCES.verification
) -> PublicReport:
    """Check the threshold rows of every used signal and that the announced
    threshold is an equilibrium at the signal's posterior.

    The rows are the posterior conditions scaled by the signal mass, so
    the posterior checks use tolerance tol / mass.
    """
    check_structure(inst)
    n = inst.n_agents
    if mech.weights.shape != (2, n + 1):
        raise InputError(
            f"weights have shape {mech.weights.shape}, expected {(2, n + 1)}"
        )
    F, r = inst.F, inst.r
    phi = mech.weights
    report = PublicReport(tol=tol)
    report.nonnegativity = float(np.max(np.maximum(0.0, -phi), initial=0.0))
    report.mass_violation = max(
        abs(phi[0].sum() - inst.prior0), abs(phi[1].sum() - inst.prior1)
    )

    posteriors = mech.posteriors
    for i in mech.support:
        mass = float(mech.masses[i])
        move = 0.0
        if i >= 1:
            move = max(0.0, -float((F[i] - r[i]) * phi[1, i] - r[i] * phi[0, i]))
        stay = 0.0
        if i <= n - 1:
            gain = (F[i + 1] - r[i + 1]) * phi[1, i] - r[i + 1] * phi[0, i]
            stay = max(0.0, float(gain))
        q = posteriors[i]
        q_tol = tol / mass
        consistent = bool(
            move <= tol
            and stay <= tol
            and underline_i(inst, q, tol=q_tol) <= i <= overline_i(inst, q, tol=q_tol)
        )
        report.signals.append(
            SignalCheck(
                signal=i,
                mass=mass,
                posterior=q,
                move_violation=move,
                stay_violation=stay,
                consistent=consistent,
            )
        )
    return report


@dataclass
class TwoSignalResult:
    value: float
    q_low: float
    q_high: float
    weight_low: float


def two_signal_grid_search(inst: Instance, steps: int = 200) -> TwoSignalResult:
    """Best public mechanism that splits the prior into two posteriors.

    Each posterior is followed by its sender-preferred threshold
    equilibrium; the grid covers [0, prior1] for the low posterior and
    [prior1, 1] for the high one, endpoints included.
    """
    if steps < 1:
        raise InputError("grid search needs at least one step")
    check_structure(inst)
    mu = inst.prior1
    lows = np.linspace(0.0, mu, steps + 1)
    highs = np.linspace(mu, 1.0, steps + 1)
    v_low = np.array([sender_preferred_welfare(inst, float(q)) for q in lows])
    v_high = np.array([sender_preferred_welfare(inst, float(q)) for q in highs])

    best = TwoSignalResult(
        value=sender_preferred_welfare(inst, mu), q_low=mu, q_high=mu, weight_low=1.0
    )
    span = highs[None, :] - lows[:, None]
    with np.errstate(divide="ignore", invalid="ignore"):
        lam = np.where(span > 0, (highs[None, :] - mu) / span, 1.0)
    values = lam * v_low[:, None] + (1.0 - lam) * v_high[None, :]
    a, b = np.unravel_index(int(np.argmax(values)), values.shape)
    if values[a, b] > best.value:
        best = TwoSignalResult(
            value=float(values[a, b]),
            q_low=float(lows[a]),
            q_high=float(highs[b]),
            weight_low=float(lam[a, b]),
        )
    return best
