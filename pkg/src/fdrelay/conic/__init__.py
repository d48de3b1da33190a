"""
Real conic programs, the solver contract and complex-to-real lifting helpers.
"""
from .lifting import imag_part_row, lift_complex, lift_matrix, quad_norm_rows, real_part_row, unlift  # noqa: F401
from .program import (  # noqa: F401
    ComplexBlock,
    ConeProgram,
    ConeSolution,
    ConeStatus,
    LinearConstraint,
    RsocConstraint,
    SocConstraint,
    VariableLayout,
)
from .solver import DEFAULT_TOLERANCE, solve, solve_or_raise  # noqa: F401
