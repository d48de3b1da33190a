"""
Matrix forms of the slack constraints and their cone equivalents.

The power-minimization subproblems are naturally stated with two kinds of linear matrix inequalities: the 2x2 block
``[[lam, s], [conj(s), rho]] >= 0`` and the arrow block ``[[mu, v^H], [v, xi I]] >= 0``. Both are Schur complements
of rotated second-order cones, which is what the solvers actually use. These helpers build the matrices and test
them by eigenvalues so the equivalence can be audited.
"""
import numpy as np


def two_by_two_block(lam: float, s: complex, rho: float) -> np.ndarray:
    return np.array([[lam, s], [np.conj(s), rho]], dtype=complex)


def arrow_block(mu: float, v: np.ndarray, xi: float) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    m = v.shape[0]
    block = np.zeros((m + 1, m + 1), dtype=complex)
    block[0, 0] = mu
    block[0, 1:] = v.conj()
    block[1:, 0] = v
    block[1:, 1:] = xi * np.eye(m)
    return block


def is_psd(matrix: np.ndarray, tol: float = 1e-12) -> bool:
    """Smallest eigenvalue of the Hermitian matrix is at least ``-tol`` times its scale."""
    scale = max(1.0, float(np.max(np.abs(matrix))))
    return bool(np.linalg.eigvalsh(matrix).min() >= -tol * scale)


def rotated_cone_holds(norm2: float, y: float, z: float, tol: float = 1e-12) -> bool:
    """``norm2 <= y z`` with ``y, z >= 0``."""
    scale = max(1.0, abs(y * z), norm2)
    return bool(y >= -tol and z >= -tol and norm2 <= y * z + tol * scale)
