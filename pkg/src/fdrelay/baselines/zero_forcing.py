"""
Zero-forcing benchmark: the same four-block alternation with every block in closed form.

Each user transmits in the null space of its own receiver and the relay transmits in the null space of its own loop,
so no self-interference survives and each SINR reduces to ``a_i b_{3-i} / (sigma2 a_i ||w||^2 + sigma2)`` with
``a_i = |u_i^H H_Ri v|^2`` and ``b_j = |w^H H_jR f_j|^2``. Every block then picks a direction and the smallest
scaling along it that meets both targets. The relay blocks fall back to the previous direction whenever that one
needs less power, which keeps the total power trajectory nonincreasing.
"""
from typing import Optional, Tuple

import numpy as np
import structlog

from fdrelay.ao.config import AoConfig
from fdrelay.ao.loop import StageOutcome, alternate
from fdrelay.ao.report import SolveReport
from fdrelay.baselines.directions import minimal_scaling, projected_unit, relay_null_direction, user_null_direction
from fdrelay.baselines.init import init_beamformers
from fdrelay.errors import DegenerateDirectionError, InfeasibleDirectionError
from fdrelay.model.system import USERS, BeamformerSet, ChannelSet, LinkBudget, other
from fdrelay.tracer import null_tracer

logger = structlog.get_logger()

ZF_TOLERANCE = 1e-10


def _norm2(x: np.ndarray) -> float:
    return float(np.vdot(x, x).real)


def _downlink_gain(ch: ChannelSet, bf: BeamformerSet, i: int, v: np.ndarray = None) -> float:
    v = bf.v if v is None else v
    return float(abs(np.vdot(bf.u(i), ch.downlink(i) @ v)) ** 2)


def _forwarded_gain(ch: ChannelSet, w: np.ndarray, f: np.ndarray, i: int) -> float:
    return float(abs(np.vdot(w, ch.uplink(i) @ f)) ** 2)


def _previous_direction(x: np.ndarray, leak: float, scale: float) -> Optional[np.ndarray]:
    """The unit direction of ``x`` when it still satisfies the zero-forcing equality."""
    norm = float(np.linalg.norm(x))
    if norm == 0.0 or leak > ZF_TOLERANCE * max(scale, 1e-300) * norm:
        return None
    return x / norm


def zf_f_step(ch: ChannelSet, bf: BeamformerSet, budget: LinkBudget) -> Tuple[np.ndarray, np.ndarray]:
    """
    Optimal zero-forcing user beamformers for fixed ``v``, ``w`` and ``u_i``.

    User ``i`` transmits along ``Z_i c_i`` with the power that makes its partner's SINR meet the target exactly.

    Parameters
    ----------
    ch : ChannelSet
    bf : BeamformerSet
        Current point; only ``v``, ``w`` and the receivers are read.
    budget : LinkBudget
        Extra argument beyond ``(ch, bf)``: the SINR targets and the noise power that size the transmit power.

    Raises
    ------
    RankDeficientError
        If a user null space is empty.
    InfeasibleDirectionError
        If the relay collects nothing along the chosen direction or the partner hears nothing from the relay.
    """
    sigma2, w_norm2 = budget.sigma2, _norm2(bf.w)
    f = {}
    for i in USERS:
        partner = other(i)
        direction, gain = user_null_direction(ch, bf.w, bf.u(i), i)
        reach = _downlink_gain(ch, bf, partner)
        need = budget.target(partner) * sigma2 * (reach * w_norm2 + 1.0)
        alpha = minimal_scaling([(reach * gain, 0.0, need)], what=f"f_{i}")
        f[i] = np.sqrt(alpha) * direction
    return f[1], f[2]


def zf_u_step(ch: ChannelSet, bf: BeamformerSet) -> Tuple[np.ndarray, np.ndarray]:
    """
    Zero-forcing user receivers: the relay signal projected off the user's own leakage.

    Raises
    ------
    DegenerateDirectionError
        If the relay signal lies entirely along the leakage.
    """
    return tuple(projected_unit(ch.downlink(i) @ bf.v, ch.user_si(i) @ bf.f(i), what=f"u_{i}",
                                error=DegenerateDirectionError) for i in USERS)


def _relay_transmit_scaling(ch: ChannelSet, bf: BeamformerSet, budget: LinkBudget, direction: np.ndarray) -> float:
    noise_w = budget.sigma2 * _norm2(bf.w)
    gains = []
    for i in USERS:
        reach = _downlink_gain(ch, bf, i, direction)
        forwarded = _forwarded_gain(ch, bf.w, bf.f(other(i)), other(i))
        gains.append((reach * forwarded, reach * budget.target(i) * noise_w, budget.target(i) * budget.sigma2))
    return minimal_scaling(gains, what="v")


def zf_v_step(ch: ChannelSet, bf: BeamformerSet, budget: LinkBudget) -> np.ndarray:
    """
    Zero-forcing relay transmit beamformer.

    The principal direction of the null space of ``w^H H_RR`` is scaled minimally to meet both targets; the previous
    direction is kept instead when its minimal scaling is smaller. With ``w`` fixed the relay power is proportional to
    ``||v||^2``, so the smaller scaling is the cheaper point.

    Raises
    ------
    InfeasibleDirectionError
        If neither direction can meet both targets.
    """
    candidates = []
    failure = None
    try:
        principal = relay_null_direction(ch, bf.w, bf.u_1, bf.u_2)
        candidates.append((_relay_transmit_scaling(ch, bf, budget, principal), principal))
    except InfeasibleDirectionError as error:
        failure = error

    previous = _previous_direction(bf.v, abs(np.vdot(bf.w, ch.h_rr @ bf.v)), float(np.linalg.norm(ch.h_rr.conj().T @ bf.w)))
    if previous is not None:
        try:
            candidates.append((_relay_transmit_scaling(ch, bf, budget, previous), previous))
        except InfeasibleDirectionError as error:
            failure = failure or error

    if not candidates:
        raise failure or InfeasibleDirectionError("No zero-forcing relay transmit direction", direction="v")
    alpha, direction = min(candidates, key=lambda candidate: candidate[0])
    return np.sqrt(alpha) * direction


def _relay_receive_candidate(ch: ChannelSet, bf: BeamformerSet, budget: LinkBudget,
                             direction: np.ndarray) -> Tuple[float, np.ndarray]:
    collected = {i: float(abs(np.vdot(direction, ch.uplink(i) @ bf.f(i))) ** 2) for i in USERS}
    gains = []
    for i in USERS:
        reach = _downlink_gain(ch, bf, i)
        noise = budget.target(i) * budget.sigma2
        gains.append((reach * collected[other(i)], noise * reach, noise))
    scale2 = minimal_scaling(gains, what="w")
    power = _norm2(bf.v) * scale2 * (collected[1] + collected[2] + budget.sigma2)
    return power, np.sqrt(scale2) * direction


def zf_w_step(ch: ChannelSet, bf: BeamformerSet, budget: LinkBudget) -> np.ndarray:
    """
    Zero-forcing relay receive beamformer.

    The uplink sum ``H_1R f_1 + H_2R f_2`` projected off the loop ``H_RR v`` gives the direction; the scaling is the
    smallest meeting both targets. The previous direction, minimally rescaled, wins when it needs less relay power.

    Raises
    ------
    InfeasibleDirectionError
        If neither direction can meet both targets.
    """
    loop = ch.h_rr @ bf.v
    candidates = []
    failure = None
    try:
        direction = projected_unit(ch.h_1r @ bf.f_1 + ch.h_2r @ bf.f_2, loop, what="w")
        candidates.append(_relay_receive_candidate(ch, bf, budget, direction))
    except InfeasibleDirectionError as error:
        failure = error

    previous = _previous_direction(bf.w, abs(np.vdot(bf.w, loop)), float(np.linalg.norm(loop)))
    if previous is not None:
        try:
            candidates.append(_relay_receive_candidate(ch, bf, budget, previous))
        except InfeasibleDirectionError as error:
            failure = failure or error

    if not candidates:
        raise failure or InfeasibleDirectionError("No zero-forcing relay receive direction", direction="w")
    return min(candidates, key=lambda candidate: candidate[0])[1]


def zf_ao(ch: ChannelSet, budget: LinkBudget, cfg: AoConfig = None, init: BeamformerSet = None,
          tracer=null_tracer, correlation_id: str = None) -> SolveReport:
    """
    Alternate the four zero-forcing blocks in the order v, w, f, u from the initialization point.

    Raises
    ------
    RankDeficientError
        If no initialization point exists and ``init`` was not given.
    """
    cfg = cfg or AoConfig()
    init = init if init is not None else init_beamformers(ch, budget)

    def v_stage(bf: BeamformerSet) -> StageOutcome:
        return StageOutcome(bf.replace(v=zf_v_step(ch, bf, budget)))

    def w_stage(bf: BeamformerSet) -> StageOutcome:
        return StageOutcome(bf.replace(w=zf_w_step(ch, bf, budget)))

    def f_stage(bf: BeamformerSet) -> StageOutcome:
        f_1, f_2 = zf_f_step(ch, bf, budget)
        return StageOutcome(bf.replace(f_1=f_1, f_2=f_2))

    def u_stage(bf: BeamformerSet) -> StageOutcome:
        u_1, u_2 = zf_u_step(ch, bf)
        return StageOutcome(bf.replace(u_1=u_1, u_2=u_2))

    stages = [("v", v_stage), ("w", w_stage), ("f", f_stage), ("u", u_stage)]
    return alternate("ZfFD", ch, budget, cfg, init, stages, tracer=tracer, correlation_id=correlation_id)
