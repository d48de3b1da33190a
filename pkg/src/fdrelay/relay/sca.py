"""
The successive convex approximation loop shared by the relay transmit and receive subproblems.
"""
from typing import Callable, List, NamedTuple, Sequence, Tuple

import numpy as np
import structlog
from pydantic import BaseModel, ConfigDict, Field

from fdrelay.errors import DegenerateDirectionError, FdRelayError
from fdrelay.tracer import null_tracer

logger = structlog.get_logger()

ACCEPT_SLACK = -1e-6
ACCEPT_OBJECTIVE_NOISE = 1e-9
MIN_MU = 1e-8
DEGENERATE_GAIN = 1e-12
PERTURBATION = 1e-6


def nondegenerate_start(x: np.ndarray, directions: Sequence[np.ndarray], block: str) -> np.ndarray:
    """
    Return ``x``, or ``x`` nudged by ``1e-6 ||x||`` along a seeded random unit direction when some
    ``|d^H x|`` is below ``1e-12``.

    Raises
    ------
    DegenerateDirectionError
        If the nudged point is still degenerate.
    """
    def degenerate(point):
        return any(abs(np.vdot(d, point)) < DEGENERATE_GAIN for d in directions)

    if not degenerate(x):
        return x
    rng = np.random.default_rng(0)
    step = rng.standard_normal(x.shape[0]) + 1j * rng.standard_normal(x.shape[0])
    nudged = x + PERTURBATION * max(float(np.linalg.norm(x)), 1.0) * step / np.linalg.norm(step)
    if degenerate(nudged):
        raise DegenerateDirectionError("SCA start has a vanishing slack direction", block=block)
    logger.info("Perturbed degenerate SCA start", block=block)
    return nudged


def next_reference(solved: float, tightest: float) -> float:
    """
    Slack reference for the next SCA step.

    The solver's slack is used unless it collapsed to zero or drifted past the tight value ``1 / |d^H x|^2``, which
    is always a valid reference.
    """
    if not np.isfinite(tightest):
        return solved
    if not np.isfinite(solved) or solved <= 1e-9 * tightest:
        return tightest
    return min(solved, tightest)


class ScaStep(NamedTuple):
    """One conic solve around a reference point."""
    iterate: np.ndarray
    rho: Tuple[float, float]
    objective: float


class ScaState(BaseModel):
    """
    Progress of one SCA run.

    ``trajectory[0]`` is the true subproblem objective at the starting point and every later entry belongs to an
    accepted step, so the trajectory never increases by more than solver noise.
    """
    model_config = ConfigDict(arbitrary_types_allowed=True)

    iterate: np.ndarray = Field(..., description="Current beamformer (v or w)")
    rho: Tuple[float, float] = Field(..., description="Slack references for the next step")
    trajectory: List[float] = Field(default_factory=list, description="True objective after each accepted step")
    iterations: int = Field(0, description="Conic steps attempted")
    solves: int = Field(0, description="Conic programs submitted")
    stop_reason: str = Field("", description="converged, max_iters or rejected")
    audit_failures: int = Field(0, description="Minorant audits that did not pass")


def run_sca(block: str,
            start: np.ndarray,
            rho: Tuple[float, float],
            step: Callable[[np.ndarray, Tuple[float, float]], ScaStep],
            objective: Callable[[np.ndarray], float],
            slack: Callable[[np.ndarray], float],
            max_iters: int,
            tol_rel: float,
            audit: Callable[[np.ndarray, Tuple[float, float]], bool] = None,
            tracer=null_tracer,
            correlation_id: str = None) -> ScaState:
    """
    Iterate conic steps from ``start`` until the relative objective improvement drops below ``tol_rel``.

    A step is accepted only when its iterate satisfies the original nonconvex constraints (relative slack at least
    ``-1e-6``) and does not increase the true objective; otherwise the loop stops at the previous iterate.

    Parameters
    ----------
    block : str
        ``"v"`` or ``"w"``, for logs and tracer events.
    step : callable
        Solves the convexified program around ``(iterate, rho)``.
    objective : callable
        True subproblem objective of an iterate.
    slack : callable
        Smallest relative slack of the original constraints at an iterate.
    audit : callable, optional
        Minorant audit at each reference; returns False on failure.

    Raises
    ------
    FdRelayError
        Subproblem failures, with ``sca_iteration`` and ``block`` added to their context.
    """
    state = ScaState(iterate=start, rho=rho, trajectory=[objective(start)])
    while state.iterations < max_iters:
        state.iterations += 1
        if audit is not None and not audit(state.iterate, state.rho):
            state.audit_failures += 1
        try:
            candidate = step(state.iterate, state.rho)
        except FdRelayError as error:
            raise error.with_context(block=block, sca_iteration=state.iterations)
        finally:
            state.solves += 1

        previous = state.trajectory[-1]
        value = objective(candidate.iterate)
        accepted = slack(candidate.iterate) >= ACCEPT_SLACK and value <= previous * (1.0 + ACCEPT_OBJECTIVE_NOISE)
        tracer.record_sca_step(block, iteration=state.iterations, objective=value, accepted=accepted,
                               correlation_id=correlation_id)
        if not accepted:
            logger.info("SCA step rejected", block=block, iteration=state.iterations, objective=value,
                        previous=previous)
            state.stop_reason = "rejected"
            return state

        state.iterate, state.rho = candidate.iterate, candidate.rho
        state.trajectory.append(value)
        if previous - value < tol_rel * abs(previous):
            state.stop_reason = "converged"
            return state

    state.stop_reason = "max_iters"
    return state
