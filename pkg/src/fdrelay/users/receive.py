"""
MMSE user receive beamformer.
"""
import numpy as np

from fdrelay.errors import DegenerateDirectionError
from fdrelay.model.system import USERS, BeamformerSet, ChannelSet

DEGENERATE_NORM = 1e-14


def mmse_u(i: int, h_ri_v: np.ndarray, h_ii_f: np.ndarray, sigma2: float) -> np.ndarray:
    """
    Unit-norm ``(sigma2 I + h h^H)^-1 g`` with ``g = H_Ri v`` and ``h = H_ii f_i``.

    The inverse is applied through the Sherman-Morrison identity:
    ``(sigma2 I + h h^H)^-1 g`` is proportional to ``g - h (h^H g) / (sigma2 + ||h||^2)``.

    Raises
    ------
    DegenerateDirectionError
        If ``||H_Ri v|| < 1e-14``.
    """
    g = np.asarray(h_ri_v, dtype=complex)
    h = np.asarray(h_ii_f, dtype=complex)
    if np.linalg.norm(g) < DEGENERATE_NORM:
        raise DegenerateDirectionError("Relay signal vanishes at the user receiver", user=i)
    u = g - h * (np.vdot(h, g) / (sigma2 + float(np.vdot(h, h).real)))
    return u / np.linalg.norm(u)


def mmse_receivers(bf: BeamformerSet, ch: ChannelSet, sigma2: float) -> BeamformerSet:
    """Replace both user receive beamformers by their MMSE solutions."""
    u = {i: mmse_u(i, ch.downlink(i) @ bf.v, ch.user_si(i) @ bf.f(i), sigma2) for i in USERS}
    return bf.replace(u_1=u[1], u_2=u[2])
