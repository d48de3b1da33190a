"""
Steady-state closed forms for the relay output power, the user SINRs and the total transmit power.

The relay re-transmits everything it hears one processing delay later, including its own leaked output, so its
signal is a geometric series in the loop gain ``|w^H H_RR v|``. Every evaluator here assumes that series converges.
"""
from typing import List, Sequence, Tuple

import numpy as np
import structlog
from pydantic import BaseModel, Field

from fdrelay.errors import LoopUnstableError
from fdrelay.model.system import USERS, BeamformerSet, ChannelSet

logger = structlog.get_logger()

UNIT_NORM_TOLERANCE = 1e-9


def loop_gain(w: np.ndarray, v: np.ndarray, h_rr: np.ndarray) -> float:
    """Return ``|w^H H_RR v|``."""
    return float(abs(np.vdot(w, h_rr @ v)))


def forwarded_gains(bf: BeamformerSet, ch: ChannelSet) -> Tuple[float, float]:
    """The per-user powers ``|w^H H_iR f_i|^2`` that the relay receive beamformer collects."""
    return tuple(float(abs(np.vdot(bf.w, ch.uplink(i) @ bf.f(i))) ** 2) for i in USERS)


def _stable_loop_power(bf: BeamformerSet, ch: ChannelSet) -> float:
    gain = loop_gain(bf.w, bf.v, ch.h_rr)
    if gain >= 1.0:
        raise LoopUnstableError("Relay loop gain must be below one for finite relay power", loop_gain=gain)
    return gain ** 2


def relay_power(bf: BeamformerSet, ch: ChannelSet, sigma2: float) -> float:
    """
    Relay output power in watts.

    ``||v||^2 (|w^H H_1R f_1|^2 + |w^H H_2R f_2|^2 + sigma2 ||w||^2) / (1 - |w^H H_RR v|^2)``

    Raises
    ------
    LoopUnstableError
        If the loop gain is one or more.
    """
    loop2 = _stable_loop_power(bf, ch)
    b_1, b_2 = forwarded_gains(bf, ch)
    w_norm2 = float(np.vdot(bf.w, bf.w).real)
    v_norm2 = float(np.vdot(bf.v, bf.v).real)
    return v_norm2 * (b_1 + b_2 + sigma2 * w_norm2) / (1.0 - loop2)


def sinr(i: int, bf: BeamformerSet, ch: ChannelSet, sigma2: float) -> float:
    """
    SINR of user ``i`` after its receive beamformer.

    The desired term is the partner's symbol forwarded once through the relay. Everything the relay loop forwards
    again, the forwarded relay noise, the user's residual self-interference and the user's own noise are
    interference. The user's own symbol forwarded once is known to the user and is not counted.

    Raises
    ------
    LoopUnstableError
        If the loop gain is one or more.
    """
    loop2 = _stable_loop_power(bf, ch)
    b_1, b_2 = forwarded_gains(bf, ch)
    b_partner = b_2 if i == 1 else b_1
    a = float(abs(np.vdot(bf.u(i), ch.downlink(i) @ bf.v)) ** 2)
    w_norm2 = float(np.vdot(bf.w, bf.w).real)
    self_interference = float(abs(np.vdot(bf.u(i), ch.user_si(i) @ bf.f(i))) ** 2)

    numerator = a * b_partner
    denominator = (a * loop2 / (1.0 - loop2) * (b_1 + b_2)
                   + sigma2 * a * w_norm2 / (1.0 - loop2)
                   + self_interference
                   + sigma2)
    return numerator / denominator


def total_power(bf: BeamformerSet, ch: ChannelSet, sigma2: float) -> float:
    """Relay power plus both user transmit powers."""
    user_power = sum(float(np.vdot(bf.f(i), bf.f(i)).real) for i in USERS)
    return relay_power(bf, ch, sigma2) + user_power


class ConstraintMargin(BaseModel):
    """One SINR constraint of a feasibility audit."""
    user: int = Field(..., description="User index (1 or 2)")
    sinr: float = Field(..., description="Achieved SINR, linear")
    target: float = Field(..., description="Required SINR, linear")
    margin: float = Field(..., description="sinr - target * (1 - tol_rel); negative means violated")


class FeasibilityReport(BaseModel):
    """
    Outcome of :func:`check_feasible`. ``feasible`` is the verdict; the other fields record every margin.
    """
    feasible: bool = Field(..., description="True when every constraint holds")
    loop_gain: float = Field(..., description="|w^H H_RR v|")
    loop_stable: bool = Field(..., description="loop_gain < 1")
    margins: List[ConstraintMargin] = Field(default_factory=list, description="Per-user SINR margins")
    unit_norm_errors: Tuple[float, float] = Field(..., description="| ||u_i|| - 1 | per user")

    def failures(self) -> List[str]:
        reasons = []
        if not self.loop_stable:
            reasons.append(f"loop gain {self.loop_gain:.6g} >= 1")
        for margin in self.margins:
            if margin.margin < 0.0:
                reasons.append(f"user {margin.user} SINR {margin.sinr:.6g} below target {margin.target:.6g}")
        for index, error in enumerate(self.unit_norm_errors, start=1):
            if error > UNIT_NORM_TOLERANCE:
                reasons.append(f"u_{index} norm off by {error:.3g}")
        return reasons


def check_feasible(bf: BeamformerSet, ch: ChannelSet, targets: Sequence[float], sigma2: float,
                   tol_rel: float = 1e-4) -> FeasibilityReport:
    """
    Audit a beamformer set against the SINR targets.

    The verdict is true when both SINRs reach ``targets[i] * (1 - tol_rel)``, the loop is stable and both receive
    beamformers are unit norm. Failures are encoded in the report, never raised.
    """
    gain = loop_gain(bf.w, bf.v, ch.h_rr)
    norm_errors = tuple(float(abs(np.linalg.norm(bf.u(i)) - 1.0)) for i in USERS)
    stable = gain < 1.0
    margins = []
    if stable:
        for i in USERS:
            achieved = sinr(i, bf, ch, sigma2)
            target = float(targets[i - 1])
            margins.append(ConstraintMargin(user=i, sinr=achieved, target=target,
                                            margin=achieved - target * (1.0 - tol_rel)))
    feasible = (stable
                and all(m.margin >= 0.0 for m in margins)
                and all(e <= UNIT_NORM_TOLERANCE for e in norm_errors))
    report = FeasibilityReport(feasible=feasible, loop_gain=gain, loop_stable=stable, margins=margins,
                               unit_norm_errors=norm_errors)
    if not feasible:
        logger.debug("Feasibility audit failed", reasons=report.failures())
    return report
