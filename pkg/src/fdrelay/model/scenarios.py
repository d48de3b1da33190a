"""
Random beamformer sets for audits and property checks.
"""
import numpy as np
from numpy.random import Generator

from fdrelay.errors import RankDeficientError
from fdrelay.model.closed_form import loop_gain
from fdrelay.model.system import BeamformerSet, ChannelSet, SystemDims, complex_gaussian


def _unit(rng: Generator, size: int) -> np.ndarray:
    z = complex_gaussian(rng, size, 1.0)
    return z / np.linalg.norm(z)


def random_beamformers(rng: Generator, dims: SystemDims, scale: float = 1.0) -> BeamformerSet:
    """
    Gaussian transmit/receive beamformers with unit-norm user receivers.

    ``scale`` multiplies v, w, f_1 and f_2.
    """
    return BeamformerSet(
        v=scale * complex_gaussian(rng, dims.m_r, 1.0),
        w=scale * complex_gaussian(rng, dims.n_r, 1.0),
        f_1=scale * complex_gaussian(rng, dims.m_1, 1.0),
        f_2=scale * complex_gaussian(rng, dims.m_2, 1.0),
        u_1=_unit(rng, dims.n_1),
        u_2=_unit(rng, dims.n_2),
    )


def with_loop_gain(bf: BeamformerSet, ch: ChannelSet, target: float) -> BeamformerSet:
    """Rescale v so that ``|w^H H_RR v|`` equals ``target``."""
    current = loop_gain(bf.w, bf.v, ch.h_rr)
    if current == 0.0:
        raise RankDeficientError("Loop gain is zero and cannot be rescaled", target=target)
    return bf.replace(v=bf.v * (target / current))
