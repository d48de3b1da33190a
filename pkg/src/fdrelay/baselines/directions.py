"""
Null-space and principal-direction helpers for the closed-form zero-forcing constructions.
"""
from typing import Sequence, Tuple, Type

import numpy as np
from scipy.linalg import null_space

from fdrelay.errors import FdRelayError, InfeasibleDirectionError, RankDeficientError
from fdrelay.model.system import ChannelSet


def orthogonal_complement(row: np.ndarray) -> np.ndarray:
    """
    Orthonormal basis ``Z`` of all ``x`` with ``row @ x == 0``.

    Raises
    ------
    RankDeficientError
        If only the zero vector qualifies.
    """
    basis = null_space(np.atleast_2d(np.asarray(row, dtype=complex)))
    if basis.shape[1] == 0:
        raise RankDeficientError("Null space is empty", size=np.shape(row)[-1])
    return basis


def principal_direction(row: np.ndarray) -> np.ndarray:
    """Unit ``c`` maximizing ``|row @ c|``: the principal right singular vector."""
    row = np.atleast_2d(np.asarray(row, dtype=complex))
    return np.linalg.svd(row)[2][0].conj()


def projected_unit(target: np.ndarray, blocker: np.ndarray, what: str,
                   error: Type[FdRelayError] = InfeasibleDirectionError) -> np.ndarray:
    """
    Normalized projection of ``target`` onto the orthogonal complement of ``blocker``.

    Raises
    ------
    InfeasibleDirectionError
        Or the given ``error`` class, if the projection vanishes.
    """
    target = np.asarray(target, dtype=complex)
    blocker = np.asarray(blocker, dtype=complex)
    blocker_norm2 = float(np.vdot(blocker, blocker).real)
    projected = target if blocker_norm2 == 0.0 else target - blocker * (np.vdot(blocker, target) / blocker_norm2)
    norm = float(np.linalg.norm(projected))
    if norm <= 1e-12 * max(float(np.linalg.norm(target)), 1e-300):
        raise error("Projection onto the zero-forcing subspace vanishes", direction=what)
    return projected / norm


def minimal_scaling(gains: Sequence[Tuple[float, float, float]], what: str) -> float:
    """
    Smallest ``s`` with ``s * (A_i - B_i) >= C_i`` for every ``(A_i, B_i, C_i)``.

    Raises
    ------
    InfeasibleDirectionError
        If some ``A_i <= B_i``.
    """
    required = []
    for index, (a, b, c) in enumerate(gains, start=1):
        if a <= 0.0 or a - b <= 1e-12 * a:
            raise InfeasibleDirectionError("No scaling meets the SINR target along this direction", direction=what,
                                           user=index, gain=a, floor=b)
        required.append(c / (a - b))
    return max(required)


def user_null_direction(ch: ChannelSet, w: np.ndarray, u_i: np.ndarray, i: int) -> Tuple[np.ndarray, float]:
    """
    Unit transmit direction of user ``i`` that is invisible to its own receiver and collected best by ``w``.

    Returns
    -------
    (direction, gain) : (np.ndarray, float)
        ``Z_i c_i`` and ``|w^H H_iR Z_i c_i|^2``.
    """
    basis = orthogonal_complement(u_i.conj() @ ch.user_si(i))
    direction = basis @ principal_direction(w.conj() @ ch.uplink(i) @ basis)
    return direction, float(abs(np.vdot(w, ch.uplink(i) @ direction)) ** 2)


def relay_null_direction(ch: ChannelSet, w: np.ndarray, u_1: np.ndarray, u_2: np.ndarray) -> np.ndarray:
    """Unit relay transmit direction ``Z_R c_R`` that leaves the relay loop open and reaches both users best."""
    basis = orthogonal_complement(w.conj() @ ch.h_rr)
    combined = (u_1.conj() @ ch.h_r1 + u_2.conj() @ ch.h_r2) @ basis
    return basis @ principal_direction(combined)
