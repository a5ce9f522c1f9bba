"""
Mechanism Service
Synchronous design, sampling and equilibrium computations behind the API
"""

from typing import List, Optional

import numpy as np
from pydantic import ValidationError

from app.core.document import MechanismDocument
from app.core.equilibrium import (
    StrategyProfile,
    equilibrium_report,
    overline_i,
    profile_welfare,
    sender_preferred_welfare,
    threshold_profile,
    underline_i,
)
from app.core.errors import DomainViolation, InputError
from app.core.model import Instance, InstanceSpec, check_structure, require_valid
from app.core.move_sampler import sample_move_sets
from app.core.private_design import (
    bound_document,
    fast_path,
    solve_private,
    verify_persuasive_marginals,
)
from app.core.public_design import solve_public, verify_public
from monitoring.logging.config import get_logger

logger = get_logger("persuasion_toolkit.mechanism_service")


def build_instance(spec: InstanceSpec, require_assumptions: bool = True) -> Instance:
    """Instance from its request form; InputError on bad tables"""
    try:
        inst = spec.build()
    except ValidationError as e:
        raise InputError(str(e)) from e
    check_structure(inst)
    if require_assumptions:
        require_valid(inst)
    return inst


class MechanismService:
    """Service for mechanism design requests"""

    @staticmethod
    def private_mechanism(
        spec: InstanceSpec, fast_path_only: bool = False
    ) -> MechanismDocument:
        inst = build_instance(spec)
        mech = fast_path(inst)
        if mech is None:
            if fast_path_only:
                raise DomainViolation("the prior exceeds the fast-path bound")
            mech = solve_private(inst)
        report = verify_persuasive_marginals(inst, mech.marginals)
        if not report.ok:
            raise DomainViolation(
                f"mechanism fails verification, worst violation {report.worst:.3e}"
            )
        doc = mech.to_document(inst)
        doc.payload["verification"] = report.to_dict()
        logger.info(
            f"private mechanism for N={inst.n_agents}: objective {mech.objective:.12g}"
        )
        return doc

    @staticmethod
    def public_mechanism(spec: InstanceSpec) -> MechanismDocument:
        inst = build_instance(spec)
        mech = solve_public(inst)
        report = verify_public(inst, mech)
        if not report.ok:
            raise DomainViolation(
                f"public mechanism fails verification at signals {report.flagged}"
            )
        doc = mech.to_document(inst)
        doc.payload["verification"] = report.to_dict()
        logger.info(
            f"public mechanism for N={inst.n_agents}: objective {mech.objective:.12g}"
        )
        return doc

    @staticmethod
    def bound(spec: InstanceSpec) -> MechanismDocument:
        return bound_document(build_instance(spec))

    @staticmethod
    def sample(
        spec: InstanceSpec, seed: int, draws: int, state: int = 1
    ) -> List[List[int]]:
        """Recommendation sets drawn from the optimal private mechanism"""
        inst = build_instance(spec)
        if state == 0:
            return [[] for _ in range(draws)]
        mech = fast_path(inst) or solve_private(inst)
        members = sample_move_sets(mech, np.random.default_rng(seed), draws)
        return [[int(i) + 1 for i in np.flatnonzero(row)] for row in members]

    @staticmethod
    def check_equilibrium(
        spec: InstanceSpec,
        q: float,
        profile: Optional[List[float]] = None,
        threshold: Optional[float] = None,
    ) -> MechanismDocument:
        inst = build_instance(spec, require_assumptions=False)
        if profile is not None:
            if len(profile) != inst.n_agents:
                raise InputError(
                    f"profile has {len(profile)} entries for {inst.n_agents} agents"
                )
            try:
                strategy = StrategyProfile(probs=tuple(profile), belief=q)
            except ValidationError as e:
                raise InputError(str(e)) from e
        else:
            strategy = threshold_profile(inst.n_agents, threshold, q)
        report = equilibrium_report(inst, strategy)
        return MechanismDocument(
            kind="equilibrium_check",
            fingerprint=inst.fingerprint(),
            payload={
                "belief": q,
                "profile": list(strategy.probs),
                "welfare": profile_welfare(inst, strategy),
                "lower_threshold": underline_i(inst, q),
                "upper_threshold": overline_i(inst, q),
                "sender_preferred_welfare": sender_preferred_welfare(inst, q),
                **report.to_dict(),
            },
        )
