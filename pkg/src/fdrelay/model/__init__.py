"""
System model: data types, steady-state closed forms and time-domain oracles.
"""
from .system import (  # noqa: F401
    USERS,
    BeamformerSet,
    ChannelSet,
    LinkBudget,
    SystemDims,
    complex_gaussian,
    generate_channels,
    other,
)
from .closed_form import (  # noqa: F401
    ConstraintMargin,
    FeasibilityReport,
    check_feasible,
    forwarded_gains,
    loop_gain,
    relay_power,
    sinr,
    total_power,
)
from .oracle import qpsk, relay_loop_response, simulate_relay_power, simulate_sinr  # noqa: F401
from .scenarios import random_beamformers, with_loop_gain  # noqa: F401
from .units import db_to_linear, dbm_to_watts, linear_to_db, watts_to_dbm  # noqa: F401
