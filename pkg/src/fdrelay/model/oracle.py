"""
Time-domain simulators of the full-duplex relay loop.

These run the sample-by-sample recursion the closed forms are derived from and estimate powers by Monte-Carlo
averaging, so they serve as independent oracles for :mod:`fdrelay.model.closed_form`. The relay processing delay is
one sample. Since the relay transmits ``v w^H r[n-1]``, all of its behaviour is captured by the scalar
``s[n] = w^H r[n]``, which obeys a first-order recursion with pole ``w^H H_RR v``.
"""
from typing import NamedTuple, Tuple

import numpy as np
import structlog
from numpy.random import Generator
from scipy.signal import lfilter

from fdrelay.errors import DomainError, LoopUnstableError
from fdrelay.model.closed_form import loop_gain
from fdrelay.model.system import BeamformerSet, ChannelSet, complex_gaussian, other

logger = structlog.get_logger()

MAX_ORACLE_LOOP_GAIN = 1.0 - 1e-3
DEFAULT_STEPS = 200_000
DEFAULT_BURN_IN = 2_000
MAX_HORIZON_SCALE = 10.0


def qpsk(rng: Generator, n: int) -> np.ndarray:
    """``n`` i.i.d. unit-power QPSK symbols."""
    bits = rng.integers(0, 2, size=(2, n))
    return ((2 * bits[0] - 1) + 1j * (2 * bits[1] - 1)) / np.sqrt(2.0)


def relay_loop_response(drive: np.ndarray, gain: complex) -> np.ndarray:
    """Run ``s[n] = drive[n] + gain * s[n-1]`` from rest."""
    return lfilter([1.0], [1.0, -gain], drive)


class LoopTrace(NamedTuple):
    """The relay's scalar received signal split into its independent contributions."""
    symbols: tuple
    from_user: tuple
    from_noise: np.ndarray
    gain: complex

    @property
    def total(self) -> np.ndarray:
        return self.from_user[0] + self.from_user[1] + self.from_noise


def scaled_horizon(gain: float, n_steps: int, burn_in: int) -> Tuple[int, int]:
    """Stretch a horizon by the loop's correlation time ``1 / (1 - gain)``, capped at ``MAX_HORIZON_SCALE``."""
    scale = min(1.0 / (1.0 - gain), MAX_HORIZON_SCALE)
    return int(np.ceil(n_steps * scale)), int(np.ceil(burn_in * scale))


def _validate_horizon(bf: BeamformerSet, ch: ChannelSet, n_steps: int, burn_in: int) -> Tuple[int, int]:
    if burn_in < 2:
        raise DomainError("burn_in must be at least 2 samples", burn_in=burn_in)
    if n_steps < 10 * burn_in:
        raise DomainError("n_steps must be at least ten times burn_in", n_steps=n_steps, burn_in=burn_in)
    gain = loop_gain(bf.w, bf.v, ch.h_rr)
    if gain > MAX_ORACLE_LOOP_GAIN:
        raise LoopUnstableError("Loop gain too close to one for a finite simulation horizon", loop_gain=gain,
                                limit=MAX_ORACLE_LOOP_GAIN)
    return scaled_horizon(gain, n_steps, burn_in)


def simulate_loop(bf: BeamformerSet, ch: ChannelSet, sigma2: float, n_steps: int, rng: Generator) -> LoopTrace:
    """Draw symbols and relay noise for ``n_steps`` samples and run the relay recursion on each contribution."""
    gain = complex(np.vdot(bf.w, ch.h_rr @ bf.v))
    symbols = (qpsk(rng, n_steps), qpsk(rng, n_steps))
    relay_noise = complex_gaussian(rng, (ch.h_rr.shape[0], n_steps), sigma2)
    from_user = tuple(
        relay_loop_response(complex(np.vdot(bf.w, ch.uplink(i) @ bf.f(i))) * symbols[i - 1], gain)
        for i in (1, 2)
    )
    from_noise = relay_loop_response(bf.w.conj() @ relay_noise, gain)
    return LoopTrace(symbols=symbols, from_user=from_user, from_noise=from_noise, gain=gain)


def simulate_relay_power(bf: BeamformerSet, ch: ChannelSet, sigma2: float, n_steps: int = DEFAULT_STEPS,
                         burn_in: int = DEFAULT_BURN_IN, rng: Generator = None) -> float:
    """
    Estimate the relay output power by simulation.

    Parameters
    ----------
    n_steps : int
        Total simulated samples, including the discarded ``burn_in`` transient, for an open loop. Both are
        stretched by :func:`scaled_horizon` for a live loop.
    rng : numpy.random.Generator
        Random stream for symbols and noise; a fresh default generator when omitted.

    Raises
    ------
    LoopUnstableError
        If the loop gain exceeds ``1 - 1e-3``.
    DomainError
        If the horizon is shorter than ten burn-in periods.
    """
    n_steps, burn_in = _validate_horizon(bf, ch, n_steps, burn_in)
    rng = rng if rng is not None else np.random.default_rng()
    trace = simulate_loop(bf, ch, sigma2, n_steps, rng)
    # x_R[n] = v s[n-1], so the transmitted power is ||v||^2 |s|^2 one sample later
    steady = trace.total[burn_in - 1:-1]
    v_norm2 = float(np.vdot(bf.v, bf.v).real)
    estimate = v_norm2 * float(np.mean(np.abs(steady) ** 2))
    logger.debug("Simulated relay power", n_steps=n_steps, burn_in=burn_in, estimate=estimate)
    return estimate


def simulate_sinr(i: int, bf: BeamformerSet, ch: ChannelSet, sigma2: float, n_steps: int = DEFAULT_STEPS,
                  burn_in: int = DEFAULT_BURN_IN, rng: Generator = None) -> float:
    """
    Estimate the SINR of user ``i`` by simulation.

    After ``u_i^H`` the user observes ``h s[n-1] + e x_i[n] + u_i^H z_i[n]`` with ``h = u_i^H H_Ri v`` and
    ``e = u_i^H H_ii f_i``. Expanding ``s[n-1]`` once splits it into the partner's fresh symbol (desired), the user's
    own fresh symbol (known, removed), the loop-recirculated signal ``gain * s[n-2]`` and fresh relay noise. The
    mutually independent interference contributions are accumulated separately and their powers summed.

    Raises
    ------
    LoopUnstableError
        If the loop gain exceeds ``1 - 1e-3``.
    """
    n_steps, burn_in = _validate_horizon(bf, ch, n_steps, burn_in)
    rng = rng if rng is not None else np.random.default_rng()
    trace = simulate_loop(bf, ch, sigma2, n_steps, rng)
    user_noise = complex_gaussian(rng, (ch.downlink(i).shape[0], n_steps), sigma2)

    partner = other(i)
    h = complex(np.vdot(bf.u(i), ch.downlink(i) @ bf.v))
    e = complex(np.vdot(bf.u(i), ch.user_si(i) @ bf.f(i)))
    b_partner = complex(np.vdot(bf.w, ch.uplink(partner) @ bf.f(partner)))

    now = slice(burn_in, n_steps)
    previous = slice(burn_in - 1, n_steps - 1)
    before_previous = slice(burn_in - 2, n_steps - 2)

    desired = h * b_partner * trace.symbols[partner - 1][previous]
    recirculated = h * trace.gain * trace.total[before_previous]
    relay_noise = h * (trace.from_noise[previous] - trace.gain * trace.from_noise[before_previous])
    self_interference = e * trace.symbols[i - 1][now]
    receiver_noise = bf.u(i).conj() @ user_noise[:, now]

    desired_power = float(np.mean(np.abs(desired) ** 2))
    interference_power = sum(float(np.mean(np.abs(part) ** 2))
                             for part in (recirculated, relay_noise, self_interference, receiver_noise))
    if interference_power == 0.0:
        return float("inf") if desired_power > 0.0 else 0.0
    estimate = desired_power / interference_power
    logger.debug("Simulated SINR", user=i, n_steps=n_steps, estimate=estimate)
    return estimate
