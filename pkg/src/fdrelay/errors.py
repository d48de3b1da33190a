"""
Exception hierarchy for fdrelay.

Every failure raised by the library derives from :class:`FdRelayError` so callers (the AO driver and the benchmark
harness in particular) can convert any of them into a report status without catching unrelated exceptions.
"""
from typing import Any, Optional


class FdRelayError(Exception):
    """Base class for all fdrelay errors.

    Parameters
    ----------
    message : str
        Human readable description.
    **context
        Free-form diagnostic context (stage, iteration, conic status, ...). Kept on ``self.context`` and rendered
        into ``str(error)``.
    """

    def __init__(self, message: str, **context: Any):
        super().__init__(message)
        self.message = message
        self.context = context

    def with_context(self, **context: Any) -> "FdRelayError":
        """Return this error after merging additional context (outer layers add stage/iteration)."""
        self.context.update(context)
        return self

    def __str__(self) -> str:
        if not self.context:
            return self.message
        details = ", ".join(f"{key}={value}" for key, value in self.context.items())
        return f"{self.message} ({details})"


class DomainError(FdRelayError, ValueError):
    """Raised when a scalar argument lies outside the domain of a function (e.g. log of a nonpositive power)."""


class DimensionMismatchError(FdRelayError, ValueError):
    """Raised when vector or matrix shapes are inconsistent."""


class LoopUnstableError(FdRelayError):
    """Raised when the relay loop gain |w^H H_RR v| is too close to (or above) one for finite relay power."""

    def __init__(self, message: str, loop_gain: Optional[float] = None, **context: Any):
        super().__init__(message, loop_gain=loop_gain, **context)
        self.loop_gain = loop_gain


class RankDeficientError(FdRelayError):
    """Raised when a required null space is empty or a normalizing denominator vanishes."""


class InfeasibleDirectionError(FdRelayError):
    """Raised when no scaling along a chosen beamforming direction can meet the SINR targets."""


class DegenerateDirectionError(FdRelayError):
    """Raised when a receive direction collapses to (numerically) zero."""


class SubproblemInfeasibleError(FdRelayError):
    """Raised when a conic subproblem is reported infeasible by the solver."""


class NumericFailureError(FdRelayError):
    """Raised when the conic solver fails even after the tolerance-relaxed retry."""


class ConfigError(FdRelayError, ValueError):
    """Raised for invalid experiment specifications or CLI arguments."""


class EmptyInputError(FdRelayError, ValueError):
    """Raised when an aggregation receives no rows."""


DROPPABLE_ERRORS = (InfeasibleDirectionError, RankDeficientError, DegenerateDirectionError)
"""Failures that mark a channel draw as dropped rather than as a hard solver failure."""
