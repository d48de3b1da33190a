"""
System, channel and beamformer data types for the full-duplex two-way relay channel.

User indices are 1-based throughout (``i in (1, 2)``) to keep the closed forms readable next to their
derivations; :func:`other` maps a user to its partner ``3 - i``.
"""
from typing import Tuple

import numpy as np
from numpy.random import Generator
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from fdrelay.errors import DimensionMismatchError

USERS = (1, 2)


def other(i: int) -> int:
    """Return the partner of user ``i``."""
    if i not in USERS:
        raise ValueError(f"User index must be 1 or 2, got {i}")
    return 3 - i


def _frozen_array(value, dtype=complex) -> np.ndarray:
    array = np.array(value, dtype=dtype, copy=True)
    array.setflags(write=False)
    return array


class SystemDims(BaseModel):
    """
    Antenna counts of the relay (R) and the two users.

    Attributes
    ----------
    m_r, m_1, m_2 : int
        Transmit antenna counts.
    n_r, n_1, n_2 : int
        Receive antenna counts.
    """
    model_config = ConfigDict(frozen=True)

    m_r: int = Field(4, ge=1, description="Relay transmit antennas")
    m_1: int = Field(2, ge=1, description="User 1 transmit antennas")
    m_2: int = Field(2, ge=1, description="User 2 transmit antennas")
    n_r: int = Field(2, ge=1, description="Relay receive antennas")
    n_1: int = Field(2, ge=1, description="User 1 receive antennas")
    n_2: int = Field(2, ge=1, description="User 2 receive antennas")

    def m(self, i: int) -> int:
        return self.m_1 if i == 1 else self.m_2

    def n(self, i: int) -> int:
        return self.n_1 if i == 1 else self.n_2


class LinkBudget(BaseModel):
    """
    Noise, target and large-scale fading parameters shared by all nodes. All powers are linear watts.
    """
    model_config = ConfigDict(frozen=True)

    sigma2: float = Field(1e-6, gt=0.0, description="Noise power in watts at relay and users")
    theta: Tuple[float, float] = Field((10.0, 10.0), description="Linear SINR targets (theta_1, theta_2)")
    rho: float = Field(1e-4, gt=0.0, description="Per-entry channel variance")
    kappa: float = Field(0.1, ge=0.0, le=1.0, description="Residual self-interference amplitude coefficient")

    @field_validator("theta")
    @classmethod
    def _positive_targets(cls, value):
        if any(t <= 0.0 for t in value):
            raise ValueError("SINR targets must be positive")
        return value

    def target(self, i: int) -> float:
        return self.theta[i - 1]

    def with_targets(self, theta: Tuple[float, float]) -> "LinkBudget":
        return LinkBudget(sigma2=self.sigma2, theta=theta, rho=self.rho, kappa=self.kappa)


class ChannelSet(BaseModel):
    """
    The seven complex channel matrices of one draw.

    Naming follows the signal direction: ``h_1r`` carries user 1 to the relay, ``h_r1`` the relay to user 1, ``h_rr``
    is the relay's residual self-interference and ``h_11``/``h_22`` are the users' own residual self-interference.
    Arrays are stored read-only so a channel set can be shared between threads and schemes.
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    h_1r: np.ndarray
    h_2r: np.ndarray
    h_rr: np.ndarray
    h_r1: np.ndarray
    h_r2: np.ndarray
    h_11: np.ndarray
    h_22: np.ndarray

    @field_validator("h_1r", "h_2r", "h_rr", "h_r1", "h_r2", "h_11", "h_22", mode="before")
    @classmethod
    def _as_complex_matrix(cls, value):
        array = _frozen_array(value)
        if array.ndim != 2:
            raise DimensionMismatchError("Channel matrices must be two-dimensional", shape=array.shape)
        if not np.all(np.isfinite(array)):
            raise ValueError("Channel entries must be finite")
        return array

    @model_validator(mode="after")
    def _consistent_shapes(self):
        n_r = self.h_1r.shape[0]
        checks = {
            "h_2r rows": (self.h_2r.shape[0], n_r),
            "h_rr rows": (self.h_rr.shape[0], n_r),
            "h_r2 cols": (self.h_r2.shape[1], self.h_r1.shape[1]),
            "h_rr cols": (self.h_rr.shape[1], self.h_r1.shape[1]),
            "h_11": (self.h_11.shape, (self.h_r1.shape[0], self.h_1r.shape[1])),
            "h_22": (self.h_22.shape, (self.h_r2.shape[0], self.h_2r.shape[1])),
        }
        for name, (actual, expected) in checks.items():
            if actual != expected:
                raise DimensionMismatchError("Inconsistent channel shapes", item=name, actual=actual,
                                             expected=expected)
        return self

    @property
    def dims(self) -> SystemDims:
        return SystemDims(m_r=self.h_rr.shape[1], m_1=self.h_1r.shape[1], m_2=self.h_2r.shape[1],
                          n_r=self.h_rr.shape[0], n_1=self.h_r1.shape[0], n_2=self.h_r2.shape[0])

    def uplink(self, i: int) -> np.ndarray:
        """H_{i,R}: user ``i`` to relay."""
        return self.h_1r if i == 1 else self.h_2r

    def downlink(self, i: int) -> np.ndarray:
        """H_{R,i}: relay to user ``i``."""
        return self.h_r1 if i == 1 else self.h_r2

    def user_si(self, i: int) -> np.ndarray:
        """H_{i,i}: residual self-interference at user ``i``."""
        return self.h_11 if i == 1 else self.h_22

    def scaled_si(self, scale: float) -> "ChannelSet":
        """Copy with the relay self-interference channel multiplied by ``scale``."""
        return self.model_copy(update={"h_rr": _frozen_array(self.h_rr * scale)})

    def without_si(self) -> "ChannelSet":
        """Copy with every residual self-interference channel set to zero."""
        return self.model_copy(update={
            "h_rr": _frozen_array(np.zeros_like(self.h_rr)),
            "h_11": _frozen_array(np.zeros_like(self.h_11)),
            "h_22": _frozen_array(np.zeros_like(self.h_22)),
        })


class BeamformerSet(BaseModel):
    """
    The six design variables.

    Attributes
    ----------
    v : np.ndarray
        Relay transmit beamformer (M_R).
    w : np.ndarray
        Relay receive beamformer (N_R), unnormalized.
    f_1, f_2 : np.ndarray
        User transmit beamformers (M_1, M_2).
    u_1, u_2 : np.ndarray
        User receive beamformers (N_1, N_2), unit norm.
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    v: np.ndarray
    w: np.ndarray
    f_1: np.ndarray
    f_2: np.ndarray
    u_1: np.ndarray
    u_2: np.ndarray

    @field_validator("v", "w", "f_1", "f_2", "u_1", "u_2", mode="before")
    @classmethod
    def _as_complex_vector(cls, value):
        array = _frozen_array(value)
        if array.ndim != 1:
            raise DimensionMismatchError("Beamformers must be one-dimensional", shape=array.shape)
        return array

    def f(self, i: int) -> np.ndarray:
        return self.f_1 if i == 1 else self.f_2

    def u(self, i: int) -> np.ndarray:
        return self.u_1 if i == 1 else self.u_2

    def replace(self, **changes) -> "BeamformerSet":
        """Return a validated copy with some beamformers replaced."""
        return BeamformerSet(**{**self._fields(), **changes})

    def with_user(self, i: int, f: np.ndarray = None, u: np.ndarray = None) -> "BeamformerSet":
        changes = {}
        if f is not None:
            changes[f"f_{i}"] = f
        if u is not None:
            changes[f"u_{i}"] = u
        return self.replace(**changes)

    def check_shapes(self, dims: SystemDims) -> None:
        expected = {"v": dims.m_r, "w": dims.n_r, "f_1": dims.m_1, "f_2": dims.m_2, "u_1": dims.n_1,
                    "u_2": dims.n_2}
        for name, size in expected.items():
            actual = getattr(self, name).shape[0]
            if actual != size:
                raise DimensionMismatchError("Beamformer does not match system dimensions", item=name,
                                             actual=actual, expected=size)

    def _fields(self) -> dict:
        return {name: getattr(self, name) for name in ("v", "w", "f_1", "f_2", "u_1", "u_2")}


def complex_gaussian(rng: Generator, shape, variance: float) -> np.ndarray:
    """Circularly-symmetric complex Gaussian entries with the given per-entry variance."""
    scale = np.sqrt(variance / 2.0)
    return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


def generate_channels(rng: Generator, dims: SystemDims, budget: LinkBudget) -> ChannelSet:
    """
    Draw one channel realization.

    Every entry is CN(0, rho); the three residual self-interference channels are further multiplied by ``kappa`` so
    their entry variance is ``kappa**2 * rho``. Draw order is fixed, so a seeded generator reproduces the draw
    bit-for-bit.

    Parameters
    ----------
    rng : numpy.random.Generator
        Seeded random stream owned by the caller.
    dims : SystemDims
        Antenna counts.
    budget : LinkBudget
        Supplies ``rho`` and ``kappa``.

    Returns
    -------
    ChannelSet
    """
    rho, kappa = budget.rho, budget.kappa
    h_1r = complex_gaussian(rng, (dims.n_r, dims.m_1), rho)
    h_2r = complex_gaussian(rng, (dims.n_r, dims.m_2), rho)
    h_rr = kappa * complex_gaussian(rng, (dims.n_r, dims.m_r), rho)
    h_r1 = complex_gaussian(rng, (dims.n_1, dims.m_r), rho)
    h_r2 = complex_gaussian(rng, (dims.n_2, dims.m_r), rho)
    h_11 = kappa * complex_gaussian(rng, (dims.n_1, dims.m_1), rho)
    h_22 = kappa * complex_gaussian(rng, (dims.n_2, dims.m_2), rho)
    return ChannelSet(h_1r=h_1r, h_2r=h_2r, h_rr=h_rr, h_r1=h_r1, h_r2=h_r2, h_11=h_11, h_22=h_22)
