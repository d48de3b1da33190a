"""
Successive convex approximation solvers for the relay transmit (``v``) and receive (``w``) beamformers.
"""
from .minorants import MinorantReport, minorant_delta, minorant_upsilon, minorant_diagnostics  # noqa: F401
from .receive import WSubproblemData, build_phi_w, w_constraint_slack, w_objective, sca_w, solve_w_step  # noqa: F401
from .sca import ScaState, ScaStep  # noqa: F401
from .transmit import VSubproblemData, build_phi, v_constraint_slack, v_objective, sca_v, solve_v_step  # noqa: F401
