"""
Seeded Monte-Carlo experiments over the schemes, their CSV tables and the command line.
"""
from .experiment import ExperimentSpec  # noqa: F401
from .harness import (  # noqa: F401
    ROW_COLUMNS,
    TRACE_COLUMNS,
    draw_channels,
    read_rows,
    run_convergence_trace,
    run_sweep,
    write_rows,
)
from .summary import hard_failure_rates, mean_power_dbm, summarize  # noqa: F401
