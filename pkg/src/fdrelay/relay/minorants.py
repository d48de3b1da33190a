"""
Tangent minorants used by the relay SCA loops, and a numerical audit of their defining properties.

For a PSD matrix ``Phi`` the quadratic ``v^H Phi v`` is convex, so its first-order expansion at ``v_ref`` lies
below it everywhere and touches it at ``v_ref``. The same holds for the convex ``1 / rho`` on ``rho > 0``.
"""
from typing import List, Optional

import numpy as np
from numpy.random import Generator
from pydantic import BaseModel, Field

from fdrelay.errors import DomainError
from fdrelay.model.system import complex_gaussian

TANGENCY_TOLERANCE = 1e-10
GRADIENT_TOLERANCE = 1e-5


def quadratic_form(phi: np.ndarray, v: np.ndarray) -> float:
    return float(np.vdot(v, phi @ v).real)


def minorant_upsilon(phi: np.ndarray, v_ref: np.ndarray, v: np.ndarray) -> float:
    """``2 Re(v_ref^H Phi v) - v_ref^H Phi v_ref``."""
    return float(2.0 * np.vdot(v_ref, phi @ v).real - quadratic_form(phi, v_ref))


def minorant_delta(rho_ref: float, rho: float) -> float:
    """``2 / rho_ref - rho / rho_ref^2``, the tangent of ``1 / rho`` at ``rho_ref``."""
    if rho_ref <= 0.0 or rho <= 0.0:
        raise DomainError("Slack references must be positive", rho_ref=rho_ref, rho=rho)
    return 2.0 / rho_ref - rho / rho_ref ** 2


class MinorantReport(BaseModel):
    """Outcome of :func:`minorant_diagnostics`. Failures are listed, never raised."""
    samples: int = Field(..., description="Random points tested for minorization")
    minorization_failures: List[str] = Field(default_factory=list, description="Points where a minorant exceeds"
                                                                               " its function")
    tangency_error_upsilon: float = Field(..., description="Relative gap at v_ref")
    tangency_error_delta: float = Field(..., description="Relative gap at rho_ref")
    gradient_error_upsilon: float = Field(..., description="Worst relative slope mismatch at v_ref")
    gradient_error_delta: float = Field(..., description="Relative slope mismatch at rho_ref")

    @property
    def passed(self) -> bool:
        return (not self.minorization_failures
                and self.tangency_error_upsilon <= TANGENCY_TOLERANCE
                and self.tangency_error_delta <= TANGENCY_TOLERANCE
                and self.gradient_error_upsilon <= GRADIENT_TOLERANCE
                and self.gradient_error_delta <= GRADIENT_TOLERANCE)


def _relative(a: float, b: float, floor: float) -> float:
    return abs(a - b) / max(abs(a), abs(b), floor)


def minorant_diagnostics(phi: np.ndarray, v_ref: np.ndarray, rho_ref: float, samples: int = 100,
                          fd_step: float = 1e-6, rng: Optional[Generator] = None) -> MinorantReport:
    """
    Check minorization, tangency and slope agreement of both minorants at a reference point.

    Parameters
    ----------
    phi : np.ndarray
        Hermitian PSD matrix.
    v_ref : np.ndarray
        Expansion point of the quadratic minorant.
    rho_ref : float
        Expansion point of the reciprocal minorant.
    samples : int
        Random points (and random directions) tested.
    fd_step : float
        Central finite-difference step, relative to the scale of the reference.
    rng : numpy.random.Generator, optional
        Source of test points; seeded with 0 when omitted.

    Returns
    -------
    MinorantReport
    """
    rng = rng if rng is not None else np.random.default_rng(0)
    v_ref = np.asarray(v_ref, dtype=complex)
    failures = []

    value_ref = quadratic_form(phi, v_ref)
    ref_norm = max(float(np.linalg.norm(v_ref)), 1e-300)
    scale = max(float(np.linalg.norm(phi, 2)) * ref_norm ** 2, 1e-300)

    for k in range(samples):
        v = ref_norm * 3.0 * complex_gaussian(rng, v_ref.shape[0], 1.0)
        gap = minorant_upsilon(phi, v_ref, v) - quadratic_form(phi, v)
        if gap > 1e-12 * max(scale, float(np.linalg.norm(phi, 2)) * float(np.vdot(v, v).real)):
            failures.append(f"upsilon sample {k}: exceeds by {gap:.3g}")
        rho = rho_ref * float(rng.uniform(1e-3, 10.0))
        gap = minorant_delta(rho_ref, rho) - 1.0 / rho
        if gap > 1e-12 / rho:
            failures.append(f"delta sample {k}: exceeds by {gap:.3g}")

    tangency_upsilon = abs(minorant_upsilon(phi, v_ref, v_ref) - value_ref) / max(abs(value_ref), scale)
    tangency_delta = abs(minorant_delta(rho_ref, rho_ref) - 1.0 / rho_ref) * rho_ref

    h = fd_step * ref_norm
    slope_floor = 1e-4 * scale / ref_norm
    gradient_upsilon = 0.0
    for _ in range(samples):
        d = complex_gaussian(rng, v_ref.shape[0], 1.0)
        d = d / np.linalg.norm(d)
        true_slope = (quadratic_form(phi, v_ref + h * d) - quadratic_form(phi, v_ref - h * d)) / (2 * h)
        minorant_slope = (minorant_upsilon(phi, v_ref, v_ref + h * d)
                          - minorant_upsilon(phi, v_ref, v_ref - h * d)) / (2 * h)
        gradient_upsilon = max(gradient_upsilon, _relative(true_slope, minorant_slope, slope_floor))

    h_rho = fd_step * rho_ref
    true_slope = (1.0 / (rho_ref + h_rho) - 1.0 / (rho_ref - h_rho)) / (2 * h_rho)
    minorant_slope = (minorant_delta(rho_ref, rho_ref + h_rho) - minorant_delta(rho_ref, rho_ref - h_rho)) / (2 * h_rho)
    gradient_delta = _relative(true_slope, minorant_slope, 1e-300)

    return MinorantReport(samples=samples, minorization_failures=failures,
                           tangency_error_upsilon=tangency_upsilon, tangency_error_delta=tangency_delta,
                           gradient_error_upsilon=gradient_upsilon, gradient_error_delta=gradient_delta)
