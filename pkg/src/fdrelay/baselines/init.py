"""
The shared starting point of every scheme.

All receivers start as uniform unit vectors. Each user then transmits inside the null space of its own receiver
with enough power to put the forwarded signal 3 dB above what its partner's SINR target needs, and the relay
transmits inside the null space of its own loop, scaled just enough to meet both targets.
"""
import numpy as np
import structlog

from fdrelay.baselines.directions import relay_null_direction, user_null_direction
from fdrelay.errors import RankDeficientError
from fdrelay.model.system import USERS, BeamformerSet, ChannelSet, LinkBudget, other

logger = structlog.get_logger()

VANISHING_GAIN = 1e-20


def _uniform(size: int) -> np.ndarray:
    return np.ones(size, dtype=complex) / np.sqrt(size)


def init_beamformers(ch: ChannelSet, budget: LinkBudget) -> BeamformerSet:
    """
    Build the zero-forcing initialization point.

    The result has ``u_i^H H_ii f_i = 0`` and ``w^H H_RR v = 0`` up to rounding, so it is feasible for the full
    problem at the budget's targets.

    Raises
    ------
    RankDeficientError
        If a null space is empty or a direction gain falls below 1e-20.
    """
    dims = ch.dims
    w = _uniform(dims.n_r)
    u = {i: _uniform(dims.n(i)) for i in USERS}
    w_norm2 = float(np.vdot(w, w).real)
    sigma2 = budget.sigma2

    f = {}
    for i in USERS:
        direction, gain = user_null_direction(ch, w, u[i], i)
        if gain < VANISHING_GAIN:
            raise RankDeficientError("User direction is invisible to the relay receiver", user=i, gain=gain)
        f[i] = np.sqrt(2.0 * budget.target(other(i)) * sigma2 * w_norm2 / gain) * direction

    direction = relay_null_direction(ch, w, u[1], u[2])
    forwarded = {i: float(abs(np.vdot(w, ch.uplink(i) @ f[i])) ** 2) for i in USERS}
    required = []
    for i in USERS:
        reach = float(abs(np.vdot(u[i], ch.downlink(i) @ direction)) ** 2)
        if reach < VANISHING_GAIN:
            raise RankDeficientError("Relay direction does not reach the user", user=i, gain=reach)
        noise = budget.target(i) * sigma2
        required.append((noise / reach) / (forwarded[other(i)] - noise * w_norm2))
    v = np.sqrt(max(required)) * direction

    logger.debug("Initialization point built", relay_scaling=max(required))
    return BeamformerSet(v=v, w=w, f_1=f[1], f_2=f[2], u_1=u[1], u_2=u[2])
