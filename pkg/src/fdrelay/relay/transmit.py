"""
Relay transmit beamformer subproblem: minimize relay power over ``v`` with ``w``, ``f_i`` and ``u_i`` fixed.

Multiplying each SINR constraint by ``1 - |g_RR^H v|^2`` gives

``v^H Phi_i v >= c_i |g_Ri^H v|^2 |g_RR^H v|^2 + theta_i sigma2 ||w||^2 |g_Ri^H v|^2 + kappa_i``

with ``c_i = theta_i (g_1R + g_2R) + g_{3-i,R}`` and ``kappa_i = theta_i (g_ii + sigma2)``. Each SCA step replaces
the left side and the reciprocal slack ``1 / rho_i`` by their tangents and solves the resulting conic program.
"""
from typing import Tuple

import numpy as np
import structlog
from pydantic import BaseModel, ConfigDict, Field, field_validator

from fdrelay.conic import DEFAULT_TOLERANCE, ConeProgram, VariableLayout, solve_or_raise
from fdrelay.errors import DegenerateDirectionError
from fdrelay.model.system import USERS, BeamformerSet, ChannelSet, LinkBudget, other
from fdrelay.relay.minorants import minorant_diagnostics, quadratic_form
from fdrelay.relay.sca import (
    ACCEPT_SLACK,
    MIN_MU,
    ScaState,
    ScaStep,
    next_reference,
    nondegenerate_start,
    run_sca,
)
from fdrelay.tracer import null_tracer

logger = structlog.get_logger()


class VSubproblemData(BaseModel):
    """
    Coefficients of the ``v`` subproblem.

    Attributes
    ----------
    g_1r, g_2r : float
        Forwarded powers ``|w^H H_iR f_i|^2``.
    g_11, g_22 : float
        Residual self-interference powers ``|u_i^H H_ii f_i|^2``.
    g_r1, g_r2 : np.ndarray
        ``H_Ri^H u_i``, so that ``u_i^H H_Ri v == g_Ri^H v``.
    g_rr : np.ndarray
        ``H_RR^H w``, so that ``w^H H_RR v == g_RR^H v``.
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    g_1r: float = Field(..., ge=0.0)
    g_2r: float = Field(..., ge=0.0)
    g_11: float = Field(..., ge=0.0)
    g_22: float = Field(..., ge=0.0)
    g_r1: np.ndarray
    g_r2: np.ndarray
    g_rr: np.ndarray
    w_norm2: float = Field(..., ge=0.0)
    sigma2: float = Field(..., gt=0.0)
    theta: Tuple[float, float]

    @field_validator("g_r1", "g_r2", "g_rr", mode="before")
    @classmethod
    def _as_vector(cls, value):
        return np.asarray(value, dtype=complex).reshape(-1)

    @classmethod
    def from_beamformers(cls, bf: BeamformerSet, ch: ChannelSet, budget: LinkBudget) -> "VSubproblemData":
        forwarded = [float(abs(np.vdot(bf.w, ch.uplink(i) @ bf.f(i))) ** 2) for i in USERS]
        leaked = [float(abs(np.vdot(bf.u(i), ch.user_si(i) @ bf.f(i))) ** 2) for i in USERS]
        return cls(g_1r=forwarded[0], g_2r=forwarded[1], g_11=leaked[0], g_22=leaked[1],
                   g_r1=ch.h_r1.conj().T @ bf.u_1, g_r2=ch.h_r2.conj().T @ bf.u_2,
                   g_rr=ch.h_rr.conj().T @ bf.w, w_norm2=float(np.vdot(bf.w, bf.w).real),
                   sigma2=budget.sigma2, theta=budget.theta)

    def forwarded(self, i: int) -> float:
        return self.g_1r if i == 1 else self.g_2r

    def self_interference(self, i: int) -> float:
        return self.g_11 if i == 1 else self.g_22

    def downlink(self, i: int) -> np.ndarray:
        return self.g_r1 if i == 1 else self.g_r2

    def kappa(self, i: int) -> float:
        return self.theta[i - 1] * (self.self_interference(i) + self.sigma2)

    def lambda_coefficient(self, i: int) -> float:
        return self.theta[i - 1] * (self.g_1r + self.g_2r) + self.forwarded(other(i))

    @property
    def noise_gain(self) -> float:
        """``g_1R + g_2R + sigma2 ||w||^2``, the relay power per unit ``||v||^2 / (1 - loop^2)``."""
        return self.g_1r + self.g_2r + self.sigma2 * self.w_norm2


def build_phi(data: VSubproblemData, i: int) -> np.ndarray:
    """``g_{3-i,R} g_Ri g_Ri^H + theta_i (g_ii + sigma2) g_RR g_RR^H``: Hermitian, PSD, rank at most two."""
    g_ri = data.downlink(i)
    return (data.forwarded(other(i)) * np.outer(g_ri, g_ri.conj())
            + data.kappa(i) * np.outer(data.g_rr, data.g_rr.conj()))


def _loop_power(data: VSubproblemData, v: np.ndarray) -> float:
    return float(abs(np.vdot(data.g_rr, v)) ** 2)


def v_objective(data: VSubproblemData, v: np.ndarray) -> float:
    """True relay power at ``v``; infinite when the loop is unstable."""
    loop2 = _loop_power(data, v)
    if loop2 >= 1.0:
        return float("inf")
    return float(np.vdot(v, v).real) * data.noise_gain / (1.0 - loop2)


def v_sinr(data: VSubproblemData, i: int, v: np.ndarray) -> float:
    loop2 = _loop_power(data, v)
    a = float(abs(np.vdot(data.downlink(i), v)) ** 2)
    interference = (a * loop2 * (data.g_1r + data.g_2r) / (1.0 - loop2)
                    + data.sigma2 * a * data.w_norm2 / (1.0 - loop2)
                    + data.self_interference(i) + data.sigma2)
    return a * data.forwarded(other(i)) / interference


def v_constraint_slack(data: VSubproblemData, v: np.ndarray) -> float:
    """Smallest relative SINR slack ``sinr_i / theta_i - 1``; ``-inf`` when the loop is unstable."""
    if _loop_power(data, v) >= 1.0:
        return float("-inf")
    return min(v_sinr(data, i, v) / data.theta[i - 1] - 1.0 for i in USERS)


def initial_rho(data: VSubproblemData, v: np.ndarray) -> Tuple[float, float]:
    """Tight slack references ``|g_Ri^H v|^-2``."""
    return tuple(1.0 / float(abs(np.vdot(data.downlink(i), v)) ** 2) for i in USERS)


def solve_v_step(data: VSubproblemData, v_ref: np.ndarray, rho_ref: Tuple[float, float],
                 tol: float = DEFAULT_TOLERANCE, tracer=null_tracer) -> ScaStep:
    """
    One convexified step around ``(v_ref, rho_ref)``.

    The program is solved in normalized variables: ``v`` is divided by ``||v_ref||``, each ``rho_i`` is multiplied
    by ``1 / rho_ref_i`` and each user constraint is divided by ``kappa_i``, so every cone works on numbers of order
    one whatever the channel scale.

    Returns
    -------
    ScaStep
        The new ``v``, the next slack references and the reported relay power
        ``(g_1R + g_2R + sigma2 ||w||^2) xi``.

    Raises
    ------
    SubproblemInfeasibleError, NumericFailureError
        From :func:`fdrelay.conic.solve_or_raise`.
    """
    scale = float(np.linalg.norm(v_ref))
    if scale == 0.0:
        raise DegenerateDirectionError("The reference transmit beamformer is zero")
    m = v_ref.shape[0]
    v_unit = v_ref / scale

    layout = VariableLayout()
    v = layout.complex("v", m)
    for name in ("xi", "mu", "rho_1", "rho_2", "lam_1", "lam_2"):
        layout.scalar(name)
    program = ConeProgram(layout.size, objective=layout.row(xi=1.0))
    zeros = np.zeros(layout.size)
    loop_rows = layout.quad_norm(v, scale * data.g_rr)

    for i in USERS:
        a = 1.0 / rho_ref[i - 1]
        g_hat = scale * data.downlink(i) / np.sqrt(a)
        kappa = data.kappa(i)
        phi_hat = scale ** 2 * build_phi(data, i) / kappa
        upsilon = (layout.real_part(v, phi_hat @ v_unit, scale=2.0)
                   - layout.row(**{f"lam_{i}": data.lambda_coefficient(i) * a / kappa}))
        noise = data.theta[i - 1] * data.sigma2 * data.w_norm2 * a / kappa
        program.add_rsoc(layout.quad_norm(v, g_hat, scale=np.sqrt(noise)), np.zeros(2), upsilon, zeros,
                         p0=-quadratic_form(phi_hat, v_unit) - 1.0, q0=1.0)
        program.add_rsoc(layout.quad_norm(v, g_hat), np.zeros(2), -layout.row(**{f"rho_{i}": 1.0}), zeros,
                         p0=2.0, q0=1.0)
        program.add_rsoc(loop_rows, np.zeros(2), layout.row(**{f"lam_{i}": 1.0}), layout.row(**{f"rho_{i}": 1.0}))

    program.add_rsoc(layout.matrix(v, np.eye(2 * m)), np.zeros(2 * m), layout.row(mu=1.0), layout.row(xi=1.0))
    program.add_rsoc(loop_rows, np.zeros(2), layout.row(mu=-1.0), zeros, p0=1.0, q0=1.0)
    program.add_linear(layout.row(mu=-1.0), -MIN_MU)

    solution = solve_or_raise(program, tol=tol, label="relay-transmit", tracer=tracer)
    x = solution.x
    v_new = scale * v.value(x)
    rho_next = []
    for i in USERS:
        solved = x[layout.scalars[f"rho_{i}"]] * rho_ref[i - 1]
        gain2 = float(abs(np.vdot(data.downlink(i), v_new)) ** 2)
        rho_next.append(next_reference(solved, 1.0 / gain2 if gain2 > 0.0 else float("inf")))
    xi = scale ** 2 * x[layout.scalars["xi"]]
    return ScaStep(iterate=v_new, rho=tuple(rho_next), objective=data.noise_gain * xi)


def _audit(data: VSubproblemData):
    def audit(v: np.ndarray, rho: Tuple[float, float]) -> bool:
        passed = True
        for i in USERS:
            report = minorant_diagnostics(build_phi(data, i), v, rho[i - 1], samples=20)
            if not report.passed:
                logger.warning("Minorant audit failed", block="v", user=i,
                               failures=report.minorization_failures[:3])
                passed = False
        return passed
    return audit


def sca_v(data: VSubproblemData, v_init: np.ndarray, max_iters: int = 20, tol_rel: float = 1e-4,
          tol: float = DEFAULT_TOLERANCE, audit: bool = False, tracer=null_tracer,
          correlation_id: str = None) -> ScaState:
    """
    Minimize relay power over ``v`` by successive convex approximation.

    Parameters
    ----------
    data : VSubproblemData
    v_init : np.ndarray
        Feasible starting point, normally the previous AO iterate.
    max_iters : int
        Cap on conic steps.
    tol_rel : float
        Stop when a step improves the relay power by less than this fraction.
    tol : float
        Conic solver tolerance.
    audit : bool
        Run the minorant audit at every reference point.

    Returns
    -------
    ScaState
        ``trajectory`` is in watts of relay power.

    Raises
    ------
    DegenerateDirectionError
        If the start has ``g_Ri^H v == 0`` and a small perturbation does not repair it.
    """
    v_init = np.asarray(v_init, dtype=complex)
    v_start = nondegenerate_start(v_init, [data.g_r1, data.g_r2], block="v")
    if v_start is not v_init and v_constraint_slack(data, v_start) < ACCEPT_SLACK:
        raise DegenerateDirectionError("Perturbed transmit beamformer is infeasible", block="v")
    return run_sca("v", v_start, initial_rho(data, v_start),
                   step=lambda v, rho: solve_v_step(data, v, rho, tol=tol, tracer=tracer),
                   objective=lambda v: v_objective(data, v),
                   slack=lambda v: v_constraint_slack(data, v),
                   max_iters=max_iters, tol_rel=tol_rel,
                   audit=_audit(data) if audit else None,
                   tracer=tracer, correlation_id=correlation_id)
