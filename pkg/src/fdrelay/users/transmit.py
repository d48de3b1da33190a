"""
User transmit beamformer subproblem: a second-order cone program in ``(f_1, f_2)`` with the relay and the user
receivers fixed.

With ``L = |w^H H_RR v|^2`` and ``a_Ri = |u_i^H H_Ri v|^2`` fixed, the SINR constraint of user ``i`` becomes

``sqrt((1 - L) a_Ri) Re(a_{3-i,R}^H f_{3-i}) >= || [sqrt(theta_i a_Ri L) a_1R^H f_1; sqrt(theta_i a_Ri L) a_2R^H f_2;
sqrt(theta_i (1 - L)) a_ii^H f_i; sqrt(theta_i sigma2 ((1 - L) + a_Ri ||w||^2))] ||``

where the left side may use the real part because rotating ``f_{3-i}`` by a common phase leaves every other term
unchanged.
"""
from typing import NamedTuple, Tuple

import numpy as np
import structlog
from pydantic import BaseModel, ConfigDict, Field, field_validator

from fdrelay.conic import DEFAULT_TOLERANCE, ConeProgram, VariableLayout, solve_or_raise
from fdrelay.errors import LoopUnstableError, SubproblemInfeasibleError
from fdrelay.model.system import USERS, BeamformerSet, ChannelSet, LinkBudget, other
from fdrelay.tracer import null_tracer

logger = structlog.get_logger()


class FSubproblemData(BaseModel):
    """
    Coefficients of the ``(f_1, f_2)`` subproblem.

    Attributes
    ----------
    a_1r, a_2r : np.ndarray
        ``H_iR^H w``.
    a_11, a_22 : np.ndarray
        ``H_ii^H u_i``.
    a_r1, a_r2 : float
        ``|u_i^H H_Ri v|^2``.
    a_rr : float
        ``|w^H H_RR v|^2``.
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    a_1r: np.ndarray
    a_2r: np.ndarray
    a_11: np.ndarray
    a_22: np.ndarray
    a_r1: float = Field(..., ge=0.0)
    a_r2: float = Field(..., ge=0.0)
    a_rr: float = Field(..., ge=0.0)
    v_norm2: float = Field(..., ge=0.0)
    w_norm2: float = Field(1.0, ge=0.0)
    sigma2: float = Field(..., gt=0.0)
    theta: Tuple[float, float]

    @field_validator("a_1r", "a_2r", "a_11", "a_22", mode="before")
    @classmethod
    def _as_vector(cls, value):
        return np.asarray(value, dtype=complex).reshape(-1)

    @classmethod
    def from_beamformers(cls, bf: BeamformerSet, ch: ChannelSet, budget: LinkBudget) -> "FSubproblemData":
        downlink = [float(abs(np.vdot(bf.u(i), ch.downlink(i) @ bf.v)) ** 2) for i in USERS]
        return cls(a_1r=ch.h_1r.conj().T @ bf.w, a_2r=ch.h_2r.conj().T @ bf.w,
                   a_11=ch.h_11.conj().T @ bf.u_1, a_22=ch.h_22.conj().T @ bf.u_2,
                   a_r1=downlink[0], a_r2=downlink[1], a_rr=float(abs(np.vdot(bf.w, ch.h_rr @ bf.v)) ** 2),
                   v_norm2=float(np.vdot(bf.v, bf.v).real), w_norm2=float(np.vdot(bf.w, bf.w).real),
                   sigma2=budget.sigma2, theta=budget.theta)

    def uplink(self, i: int) -> np.ndarray:
        return self.a_1r if i == 1 else self.a_2r

    def self_interference(self, i: int) -> np.ndarray:
        return self.a_11 if i == 1 else self.a_22

    def downlink(self, i: int) -> float:
        return self.a_r1 if i == 1 else self.a_r2

    @property
    def relay_gain(self) -> float:
        """``||v||^2 / (1 - a_RR)``, the relay power per unit of forwarded power."""
        return self.v_norm2 / (1.0 - self.a_rr)


class UserTransmitSolution(NamedTuple):
    f_1: np.ndarray
    f_2: np.ndarray
    objective: float


def _forwarded(data: FSubproblemData, f_1: np.ndarray, f_2: np.ndarray) -> Tuple[float, float]:
    return float(abs(np.vdot(data.a_1r, f_1)) ** 2), float(abs(np.vdot(data.a_2r, f_2)) ** 2)


def f_objective(data: FSubproblemData, f_1: np.ndarray, f_2: np.ndarray) -> float:
    """Relay power plus both user powers, the constant relay noise term included."""
    b_1, b_2 = _forwarded(data, f_1, f_2)
    user_power = float(np.vdot(f_1, f_1).real + np.vdot(f_2, f_2).real)
    return data.relay_gain * (b_1 + b_2 + data.sigma2 * data.w_norm2) + user_power


def f_sinr(data: FSubproblemData, i: int, f_1: np.ndarray, f_2: np.ndarray) -> float:
    forwarded = _forwarded(data, f_1, f_2)
    f_i = f_1 if i == 1 else f_2
    a, loop2 = data.downlink(i), data.a_rr
    leaked = float(abs(np.vdot(data.self_interference(i), f_i)) ** 2)
    interference = (a * loop2 * sum(forwarded) / (1.0 - loop2)
                    + data.sigma2 * a * data.w_norm2 / (1.0 - loop2)
                    + leaked + data.sigma2)
    return a * forwarded[other(i) - 1] / interference


def f_constraint_slack(data: FSubproblemData, f_1: np.ndarray, f_2: np.ndarray) -> float:
    """Smallest relative SINR slack ``sinr_i / theta_i - 1``."""
    return min(f_sinr(data, i, f_1, f_2) / data.theta[i - 1] - 1.0 for i in USERS)


def solve_f(data: FSubproblemData, tol: float = DEFAULT_TOLERANCE, tracer=null_tracer) -> UserTransmitSolution:
    """
    Globally minimize the total power over ``(f_1, f_2)``.

    The user beamformers are rescaled so every cone row is of order one; the objective is reported in watts and
    includes the constant ``||v||^2 sigma2 ||w||^2 / (1 - a_RR)``.

    Raises
    ------
    LoopUnstableError
        If ``a_RR >= 1``.
    SubproblemInfeasibleError
        If a downlink or uplink gain vanishes or the solver proves infeasibility.
    NumericFailureError
        From :func:`fdrelay.conic.solve_or_raise`.
    """
    if data.a_rr >= 1.0:
        raise LoopUnstableError("User transmit subproblem needs a stable relay loop", loop_gain=np.sqrt(data.a_rr))
    one_minus_loop = 1.0 - data.a_rr

    k, reach = {}, {}
    for i in USERS:
        partner = data.uplink(other(i))
        reach[i] = data.downlink(i) * one_minus_loop * float(np.vdot(partner, partner).real)
        if reach[i] <= 0.0:
            raise SubproblemInfeasibleError("A user cannot be reached through the relay",
                                            subproblem="user-transmit", user=i)
        k[i] = np.sqrt(data.theta[i - 1] * data.sigma2 * (one_minus_loop + data.downlink(i) * data.w_norm2))
    scale = max(k[i] / np.sqrt(reach[i]) for i in USERS)

    layout = VariableLayout()
    blocks = {1: layout.complex("f_1", data.a_1r.shape[0]), 2: layout.complex("f_2", data.a_2r.shape[0])}
    layout.scalar("t")
    program = ConeProgram(layout.size, objective=layout.row(t=1.0))

    for i in USERS:
        a, theta = data.downlink(i), data.theta[i - 1]
        coupling = np.sqrt(theta * a * data.a_rr) * scale / k[i]
        leakage = np.sqrt(theta * one_minus_loop) * scale / k[i]
        rows = np.vstack([
            layout.quad_norm(blocks[1], data.a_1r, scale=coupling),
            layout.quad_norm(blocks[2], data.a_2r, scale=coupling),
            layout.quad_norm(blocks[i], data.self_interference(i), scale=leakage),
            np.zeros((1, layout.size)),
        ])
        offset = np.zeros(rows.shape[0])
        offset[-1] = 1.0
        p = other(i)
        program.add_soc(rows, offset, layout.real_part(blocks[p], data.uplink(p),
                                                         scale=np.sqrt(one_minus_loop * a) * scale / k[i]))

    spread = 1.0 + data.relay_gain * sum(float(np.vdot(data.uplink(j), data.uplink(j)).real) for j in USERS)
    relay_weight = np.sqrt(data.relay_gain / spread)
    power_rows = np.vstack([
        layout.quad_norm(blocks[1], data.a_1r, scale=relay_weight),
        layout.quad_norm(blocks[2], data.a_2r, scale=relay_weight),
        layout.matrix(blocks[1], np.eye(2 * blocks[1].size)) / np.sqrt(spread),
        layout.matrix(blocks[2], np.eye(2 * blocks[2].size)) / np.sqrt(spread),
    ])
    program.add_rsoc(power_rows, np.zeros(power_rows.shape[0]), layout.row(t=1.0), np.zeros(layout.size), q0=1.0)

    solution = solve_or_raise(program, tol=tol, label="user-transmit", tracer=tracer)
    f_1, f_2 = (scale * blocks[i].value(solution.x) for i in USERS)
    objective = (scale ** 2 * spread * solution.x[layout.scalars["t"]]
                 + data.relay_gain * data.sigma2 * data.w_norm2)
    logger.debug("User transmit beamformers solved", objective=objective)
    return UserTransmitSolution(f_1=f_1, f_2=f_2, objective=objective)
