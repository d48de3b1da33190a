"""Conversions between decibel scales and linear quantities."""
import numpy as np

from fdrelay.errors import DomainError


def db_to_linear(db: float) -> float:
    return float(10.0 ** (db / 10.0))


def linear_to_db(value: float) -> float:
    if not value > 0.0:
        raise DomainError("Cannot take the logarithm of a nonpositive ratio", value=value)
    return float(10.0 * np.log10(value))


def dbm_to_watts(dbm: float) -> float:
    return float(10.0 ** ((dbm - 30.0) / 10.0))


def watts_to_dbm(watts: float) -> float:
    if not watts > 0.0:
        raise DomainError("Cannot express a nonpositive power in dBm", watts=watts)
    return float(10.0 * np.log10(watts) + 30.0)
