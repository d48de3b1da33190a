"""
Alternating optimization over the four beamformer blocks, with immutable per-run reports.
"""
from .config import AoConfig  # noqa: F401
from .report import FINAL_POINT_INFEASIBLE, MONOTONICITY_BREACH, ReportStatus, SolveReport, StageRecord  # noqa: F401
from .loop import StageOutcome, alternate, failed_report, point_report  # noqa: F401
from .driver import run_ao, run_scheme, tighten_ideal_bound  # noqa: F401
