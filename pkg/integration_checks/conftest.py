import numpy as np
import pytest

from fdrelay.ao import AoConfig
from fdrelay.model.system import LinkBudget, SystemDims, generate_channels
from fdrelay.model.units import db_to_linear


@pytest.fixture
def reference_dims():
    """Four relay transmit antennas, two everywhere else."""
    return SystemDims()


@pytest.fixture
def reference_budget():
    """-30 dBm noise, 1e-4 channel variance, 0.1 self-interference coefficient and 10 dB targets."""
    theta = db_to_linear(10.0)
    return LinkBudget(sigma2=1e-6, rho=1e-4, kappa=0.1, theta=(theta, theta))


@pytest.fixture
def draws(reference_dims, reference_budget):
    """Fifty seeded channel draws."""
    return [generate_channels(np.random.default_rng(np.random.SeedSequence([2024, r])), reference_dims,
                              reference_budget) for r in range(50)]


@pytest.fixture
def ao_config():
    return AoConfig()
