"""
Exact solvers for the user transmit (second-order cone program) and user receive (MMSE) beamformers.
"""
from .receive import mmse_receivers, mmse_u  # noqa: F401
from .transmit import (  # noqa: F401
    FSubproblemData,
    UserTransmitSolution,
    f_constraint_slack,
    f_objective,
    solve_f,
)
