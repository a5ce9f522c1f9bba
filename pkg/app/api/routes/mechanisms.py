"""
Mechanism Routes
Synchronous endpoints for the optimal private and public mechanisms
"""

from fastapi import APIRouter

from app.api.models.requests import (
    EquilibriumCheckRequest,
    InstanceRequest,
    PrivateRequest,
    SampleRequest,
)
from app.api.models.responses import DocumentResponse, SampleResponse
from app.services.mechanism_service import MechanismService, build_instance

router = APIRouter()


@router.post(
    "/mechanisms/private",
    response_model=DocumentResponse,
    summary="Optimal private mechanism",
)
def private_mechanism(request: PrivateRequest):
    """
    Solve the marginal LP (or apply the fast path when the prior allows it)
    and return the verified marginal table.
    """
    mechanism = MechanismService.private_mechanism(
        request.instance, request.fast_path_only
    )
    return mechanism.to_dict()


@router.post(
    "/mechanisms/public",
    response_model=DocumentResponse,
    summary="Optimal public mechanism",
)
def public_mechanism(request: InstanceRequest):
    """Optimal public threshold mechanism with the posterior of each signal."""
    return MechanismService.public_mechanism(request.instance).to_dict()


@router.post(
    "/mechanisms/bound",
    response_model=DocumentResponse,
    summary="Fast-path prior bound",
)
def persuasion_bound(request: InstanceRequest):
    return MechanismService.bound(request.instance).to_dict()


@router.post(
    "/mechanisms/sample",
    response_model=SampleResponse,
    summary="Sample recommendation sets",
)
def sample(request: SampleRequest):
    """
    Draw recommendation sets from the optimal private mechanism.

    The same seed always yields the same sets.
    """
    sets = MechanismService.sample(
        request.instance, request.seed, request.draws, request.state
    )
    return SampleResponse(
        fingerprint=build_instance(request.instance).fingerprint(),
        seed=request.seed,
        state=request.state,
        sets=sets,
    )


@router.post(
    "/equilibrium/check",
    response_model=DocumentResponse,
    summary="Certify a strategy profile",
)
def check_equilibrium(request: EquilibriumCheckRequest):
    return MechanismService.check_equilibrium(
        request.instance,
        request.q,
        profile=request.profile,
        threshold=request.threshold,
    ).to_dict()
