"""
Complex-to-real lifting.

A complex vector ``z`` of dimension ``m`` is represented by the real block ``x = [Re z; Im z]`` of size ``2m``. The
helpers here produce real rows and matrices that act on such blocks exactly as the corresponding complex forms act
on ``z``.
"""
import numpy as np

from fdrelay.errors import DimensionMismatchError


def lift_complex(z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    return np.concatenate([z.real, z.imag])


def unlift(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape[0] % 2:
        raise DimensionMismatchError("A lifted block has even length", length=x.shape[0])
    m = x.shape[0] // 2
    return x[:m] + 1j * x[m:]


def real_part_row(a: np.ndarray) -> np.ndarray:
    """Row ``r`` with ``r @ lift_complex(z) == Re(a^H z)``."""
    a = np.asarray(a, dtype=complex)
    return np.concatenate([a.real, a.imag])


def imag_part_row(a: np.ndarray) -> np.ndarray:
    """Row ``r`` with ``r @ lift_complex(z) == Im(a^H z)``."""
    a = np.asarray(a, dtype=complex)
    return np.concatenate([-a.imag, a.real])


def quad_norm_rows(a: np.ndarray) -> np.ndarray:
    """Two rows whose product with ``lift_complex(z)`` has Euclidean norm ``|a^H z|``."""
    return np.vstack([real_part_row(a), imag_part_row(a)])


def lift_matrix(s: np.ndarray) -> np.ndarray:
    """Real matrix ``L`` with ``L @ lift_complex(z) == lift_complex(S @ z)``."""
    s = np.asarray(s, dtype=complex)
    if s.ndim != 2:
        raise DimensionMismatchError("lift_matrix expects a matrix", shape=s.shape)
    return np.block([[s.real, -s.imag], [s.imag, s.real]])


def check_dimension(a: np.ndarray, m: int) -> None:
    if np.shape(a)[-1] != m:
        raise DimensionMismatchError("Coefficient does not match the lifted variable", expected=m,
                                     actual=np.shape(a)[-1])
