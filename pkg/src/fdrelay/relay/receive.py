"""
Relay receive beamformer subproblem: minimize relay power over ``w`` with ``v``, ``f_i`` and ``u_i`` fixed.

In ``w`` the SINR constraint of user ``i`` reads

``w^H Phi^w_i w >= q_Ri sum_j (theta_i + [j = 3-i]) |w^H q_jR|^2 |w^H q_RR|^2 + theta_i sigma2 q_Ri ||w||^2 + kappa_i``

so the quartic couplings are split into one shared slack ``lambda_j >= |w^H q_RR|^2 |w^H q_jR|^2`` per user,
handled exactly like the transmit subproblem. The relay power is
``||v||^2 w^H (q_1R q_1R^H + q_2R q_2R^H + sigma2 I) w / (1 - |w^H q_RR|^2)``.
"""
from typing import Tuple

import numpy as np
import structlog
from pydantic import BaseModel, ConfigDict, Field, field_validator

from fdrelay.conic import DEFAULT_TOLERANCE, ConeProgram, VariableLayout, lift_matrix, solve_or_raise
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


class WSubproblemData(BaseModel):
    """
    Coefficients of the ``w`` subproblem.

    Attributes
    ----------
    q_1r, q_2r : np.ndarray
        ``H_iR f_i``, the user signals as seen by the relay receive array.
    q_11, q_22 : float
        Residual self-interference powers ``|u_i^H H_ii f_i|^2``.
    q_r1, q_r2 : float
        Downlink powers ``|u_i^H H_Ri v|^2``.
    q_rr : np.ndarray
        ``H_RR v``, the relay's own output at its receive array.
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    q_1r: np.ndarray
    q_2r: np.ndarray
    q_11: float = Field(..., ge=0.0)
    q_22: float = Field(..., ge=0.0)
    q_r1: float = Field(..., ge=0.0)
    q_r2: float = Field(..., ge=0.0)
    q_rr: np.ndarray
    v_norm2: float = Field(..., ge=0.0)
    sigma2: float = Field(..., gt=0.0)
    theta: Tuple[float, float]

    @field_validator("q_1r", "q_2r", "q_rr", mode="before")
    @classmethod
    def _as_vector(cls, value):
        return np.asarray(value, dtype=complex).reshape(-1)

    @classmethod
    def from_beamformers(cls, bf: BeamformerSet, ch: ChannelSet, budget: LinkBudget) -> "WSubproblemData":
        leaked = [float(abs(np.vdot(bf.u(i), ch.user_si(i) @ bf.f(i))) ** 2) for i in USERS]
        downlink = [float(abs(np.vdot(bf.u(i), ch.downlink(i) @ bf.v)) ** 2) for i in USERS]
        return cls(q_1r=ch.h_1r @ bf.f_1, q_2r=ch.h_2r @ bf.f_2, q_11=leaked[0], q_22=leaked[1],
                   q_r1=downlink[0], q_r2=downlink[1], q_rr=ch.h_rr @ bf.v,
                   v_norm2=float(np.vdot(bf.v, bf.v).real), sigma2=budget.sigma2, theta=budget.theta)

    def uplink(self, i: int) -> np.ndarray:
        return self.q_1r if i == 1 else self.q_2r

    def self_interference(self, i: int) -> float:
        return self.q_11 if i == 1 else self.q_22

    def downlink(self, i: int) -> float:
        return self.q_r1 if i == 1 else self.q_r2

    def kappa(self, i: int) -> float:
        return self.theta[i - 1] * (self.self_interference(i) + self.sigma2)

    def lambda_coefficient(self, i: int, j: int) -> float:
        """Weight of the shared slack ``lambda_j`` in the constraint of user ``i``."""
        return self.downlink(i) * (self.theta[i - 1] + (1.0 if j == other(i) else 0.0))


def build_phi_w(data: WSubproblemData, i: int) -> np.ndarray:
    """``q_Ri q_{3-i,R} q_{3-i,R}^H + theta_i (q_ii + sigma2) q_RR q_RR^H``."""
    q_partner = data.uplink(other(i))
    return (data.downlink(i) * np.outer(q_partner, q_partner.conj())
            + data.kappa(i) * np.outer(data.q_rr, data.q_rr.conj()))


def _powers(data: WSubproblemData, w: np.ndarray):
    forwarded = tuple(float(abs(np.vdot(w, data.uplink(j))) ** 2) for j in USERS)
    return forwarded, float(abs(np.vdot(w, data.q_rr)) ** 2), float(np.vdot(w, w).real)


def w_objective(data: WSubproblemData, w: np.ndarray) -> float:
    """True relay power at ``w``; infinite when the loop is unstable."""
    (b_1, b_2), loop2, w_norm2 = _powers(data, w)
    if loop2 >= 1.0:
        return float("inf")
    return data.v_norm2 * (b_1 + b_2 + data.sigma2 * w_norm2) / (1.0 - loop2)


def w_sinr(data: WSubproblemData, i: int, w: np.ndarray) -> float:
    forwarded, loop2, w_norm2 = _powers(data, w)
    a = data.downlink(i)
    interference = (a * loop2 * sum(forwarded) / (1.0 - loop2)
                    + data.sigma2 * a * w_norm2 / (1.0 - loop2)
                    + data.self_interference(i) + data.sigma2)
    return a * forwarded[other(i) - 1] / interference


def w_constraint_slack(data: WSubproblemData, w: np.ndarray) -> float:
    """Smallest relative SINR slack ``sinr_i / theta_i - 1``; ``-inf`` when the loop is unstable."""
    if _powers(data, w)[1] >= 1.0:
        return float("-inf")
    return min(w_sinr(data, i, w) / data.theta[i - 1] - 1.0 for i in USERS)


def initial_rho_w(data: WSubproblemData, w: np.ndarray) -> Tuple[float, float]:
    return tuple(1.0 / float(abs(np.vdot(w, data.uplink(j))) ** 2) for j in USERS)


def solve_w_step(data: WSubproblemData, w_ref: np.ndarray, rho_ref: Tuple[float, float],
                 tol: float = DEFAULT_TOLERANCE, tracer=null_tracer) -> ScaStep:
    """
    One convexified step around ``(w_ref, rho_ref)``, normalized like :func:`fdrelay.relay.transmit.solve_v_step`.

    The objective cone is ``||S w||^2 <= xi mu`` with ``S^H S = q_1R q_1R^H + q_2R q_2R^H + sigma2 I``, built in
    normalized coordinates so that ``xi`` is of order one. The reported objective is ``||v||^2 xi``.
    """
    scale = float(np.linalg.norm(w_ref))
    if scale == 0.0:
        raise DegenerateDirectionError("The reference receive beamformer is zero")
    n = w_ref.shape[0]
    w_unit = w_ref / scale
    beta = tuple(1.0 / r for r in rho_ref)
    q_hat = {j: scale * data.uplink(j) / np.sqrt(beta[j - 1]) for j in USERS}

    layout = VariableLayout()
    w = layout.complex("w", n)
    for name in ("xi", "mu", "rho_1", "rho_2", "lam_1", "lam_2"):
        layout.scalar(name)
    program = ConeProgram(layout.size, objective=layout.row(xi=1.0))
    zeros = np.zeros(layout.size)
    loop_rows = layout.quad_norm(w, scale * data.q_rr)

    for j in USERS:
        program.add_rsoc(layout.quad_norm(w, q_hat[j]), np.zeros(2), -layout.row(**{f"rho_{j}": 1.0}), zeros,
                         p0=2.0, q0=1.0)
        program.add_rsoc(loop_rows, np.zeros(2), layout.row(**{f"lam_{j}": 1.0}), layout.row(**{f"rho_{j}": 1.0}))

    for i in USERS:
        kappa = data.kappa(i)
        phi_hat = scale ** 2 * build_phi_w(data, i) / kappa
        upsilon = layout.real_part(w, phi_hat @ w_unit, scale=2.0)
        for j in USERS:
            upsilon = upsilon - layout.row(**{f"lam_{j}": data.lambda_coefficient(i, j) * beta[j - 1] / kappa})
        noise = data.theta[i - 1] * data.sigma2 * data.downlink(i) * scale ** 2 / kappa
        program.add_rsoc(np.sqrt(noise) * layout.matrix(w, np.eye(2 * n)), np.zeros(2 * n), upsilon, zeros,
                         p0=-quadratic_form(phi_hat, w_unit) - 1.0, q0=1.0)

    total = beta[0] + beta[1] + data.sigma2 * scale ** 2
    factor = np.vstack([np.sqrt(beta[0] / total) * q_hat[1].conj()[None, :],
                        np.sqrt(beta[1] / total) * q_hat[2].conj()[None, :],
                        np.sqrt(data.sigma2 * scale ** 2 / total) * np.eye(n)])
    program.add_rsoc(layout.matrix(w, lift_matrix(factor)), np.zeros(2 * (n + 2)), layout.row(mu=1.0),
                     layout.row(xi=1.0))
    program.add_rsoc(loop_rows, np.zeros(2), layout.row(mu=-1.0), zeros, p0=1.0, q0=1.0)
    program.add_linear(layout.row(mu=-1.0), -MIN_MU)

    solution = solve_or_raise(program, tol=tol, label="relay-receive", tracer=tracer)
    x = solution.x
    w_new = scale * w.value(x)
    rho_next = []
    for j in USERS:
        solved = x[layout.scalars[f"rho_{j}"]] * rho_ref[j - 1]
        gain2 = float(abs(np.vdot(w_new, data.uplink(j))) ** 2)
        rho_next.append(next_reference(solved, 1.0 / gain2 if gain2 > 0.0 else float("inf")))
    xi = total * x[layout.scalars["xi"]]
    return ScaStep(iterate=w_new, rho=tuple(rho_next), objective=data.v_norm2 * xi)


def _audit(data: WSubproblemData):
    def audit(w: np.ndarray, rho: Tuple[float, float]) -> bool:
        passed = True
        for i in USERS:
            report = minorant_diagnostics(build_phi_w(data, i), w, rho[i - 1], samples=20)
            if not report.passed:
                logger.warning("Minorant audit failed", block="w", user=i,
                               failures=report.minorization_failures[:3])
                passed = False
        return passed
    return audit


def sca_w(data: WSubproblemData, w_init: np.ndarray, max_iters: int = 20, tol_rel: float = 1e-4,
          tol: float = DEFAULT_TOLERANCE, audit: bool = False, tracer=null_tracer,
          correlation_id: str = None) -> ScaState:
    """Minimize relay power over ``w``; see :func:`fdrelay.relay.transmit.sca_v` for the contract."""
    w_init = np.asarray(w_init, dtype=complex)
    w_start = nondegenerate_start(w_init, [data.q_1r, data.q_2r], block="w")
    if w_start is not w_init and w_constraint_slack(data, w_start) < ACCEPT_SLACK:
        raise DegenerateDirectionError("Perturbed receive beamformer is infeasible", block="w")
    return run_sca("w", w_start, initial_rho_w(data, w_start),
                   step=lambda w, rho: solve_w_step(data, w, rho, tol=tol, tracer=tracer),
                   objective=lambda w: w_objective(data, w),
                   slack=lambda w: w_constraint_slack(data, w),
                   max_iters=max_iters, tol_rel=tol_rel,
                   audit=_audit(data) if audit else None,
                   tracer=tracer, correlation_id=correlation_id)
