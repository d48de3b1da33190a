"""
fdrelay designs relay and user beamformers for a multi-antenna full-duplex two-way relay channel. It minimizes total
transmit power under per-user SINR targets while keeping a controlled fraction of the relay's self-interference loop,
and benchmarks the design against zero-forcing, ideal and half-duplex references.
"""
import importlib.metadata as _importlib_metadata
import logging

import structlog

# Core components
from .model import (  # noqa: F401
    BeamformerSet,
    ChannelSet,
    LinkBudget,
    SystemDims,
    generate_channels,
    relay_power,
    sinr,
    total_power,
)
from .ao import AoConfig, SolveReport, run_ao, run_scheme  # noqa: F401
from .baselines import SchemeKind  # noqa: F401

# Initialize logging
logging.basicConfig(level=logging.INFO)
structlog.configure(logger_factory=structlog.stdlib.LoggerFactory(), processors=[
    structlog.stdlib.filter_by_level,
    structlog.stdlib.add_logger_name,
    structlog.stdlib.add_log_level,
    structlog.processors.TimeStamper(fmt="iso"),
    structlog.processors.JSONRenderer()
])


__version__: str
try:
    __version__ = _importlib_metadata.version(__name__)
except _importlib_metadata.PackageNotFoundError:
    __version__ = "unknown"
