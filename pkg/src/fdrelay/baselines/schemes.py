"""
The simulated schemes and the channel and target transformations behind the reference ones.
"""
from enum import Enum
from typing import Tuple

from fdrelay.errors import DomainError
from fdrelay.model.system import ChannelSet, LinkBudget


class SchemeKind(str, Enum):
    """
    Every scheme the benchmark can run on a channel draw.

    ``PROPOSED_FD`` runs the full alternating optimization on the true channels. ``ZF_FD`` runs the zero-forcing
    alternation. ``FD_BASELINE`` stops at the initialization point. ``IDEAL_FD`` runs the full alternation with every
    self-interference channel zeroed. The two half-duplex schemes use the ideal channels with the rate-doubled
    targets of :func:`hd_target`.
    """
    PROPOSED_FD = "ProposedFD"
    ZF_FD = "ZfFD"
    FD_BASELINE = "FdBaseline"
    IDEAL_FD = "IdealFD"
    HALF_DUPLEX_AO = "HalfDuplexAO"
    HALF_DUPLEX_BASELINE = "HalfDuplexBaseline"

    @property
    def uses_ideal_channels(self) -> bool:
        return self in (SchemeKind.IDEAL_FD, SchemeKind.HALF_DUPLEX_AO, SchemeKind.HALF_DUPLEX_BASELINE)

    @property
    def uses_half_duplex_targets(self) -> bool:
        return self in (SchemeKind.HALF_DUPLEX_AO, SchemeKind.HALF_DUPLEX_BASELINE)

    @property
    def optimizes(self) -> bool:
        """False for the schemes that report the initialization point as is."""
        return self not in (SchemeKind.FD_BASELINE, SchemeKind.HALF_DUPLEX_BASELINE)

    @classmethod
    def parse(cls, name: str) -> "SchemeKind":
        """Look a scheme up by its value, ignoring case."""
        for kind in cls:
            if kind.value.lower() == name.strip().lower():
                return kind
        raise ValueError(f"Unknown scheme {name!r}; expected one of {', '.join(k.value for k in cls)}")


def make_ideal(ch: ChannelSet) -> ChannelSet:
    """Channels with the relay and user self-interference removed."""
    return ch.without_si()


def hd_target(theta: float) -> float:
    """
    Linear SINR a half-duplex link needs to match the rate of a full-duplex link at ``theta``.

    Half duplex spends two slots per exchange, so ``log2(1 + theta') = 2 log2(1 + theta)``.
    """
    if theta < 0.0:
        raise DomainError("SINR target must not be negative", theta=theta)
    return (1.0 + theta) ** 2 - 1.0


def scheme_inputs(kind: SchemeKind, ch: ChannelSet, budget: LinkBudget) -> Tuple[ChannelSet, LinkBudget]:
    """The channels and link budget a scheme is solved and audited against."""
    if kind.uses_ideal_channels:
        ch = make_ideal(ch)
    if kind.uses_half_duplex_targets:
        budget = budget.with_targets(tuple(hd_target(t) for t in budget.theta))
    return ch, budget
