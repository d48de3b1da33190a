"""
Immutable results of one scheme run on one channel draw.
"""
from enum import Enum
from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field

from fdrelay.model.closed_form import FeasibilityReport
from fdrelay.model.system import BeamformerSet

MONOTONICITY_BREACH = "MonotonicityBreach"
FINAL_POINT_INFEASIBLE = "InfeasibleFinalPoint"


class ReportStatus(str, Enum):
    CONVERGED = "Converged"
    MAX_ITERS = "MaxIters"
    FAILED = "Failed"


class StageRecord(BaseModel):
    """Total power right after one stage update."""
    model_config = ConfigDict(frozen=True)

    outer_iteration: int = Field(..., description="1-based outer iteration")
    stage: str = Field(..., description="v, w, f or u")
    total_power: float = Field(..., description="Total transmit power in watts after the update")
    flagged: bool = Field(False, description="The stage kept its previous value after an infeasible subproblem")


class SolveReport(BaseModel):
    """
    Auditable outcome of a scheme run.

    Attributes
    ----------
    scheme : str
        Scheme name (a ``SchemeKind`` value).
    powers : list of float
        Total power in watts at the start point followed by one entry per completed outer iteration.
    stages : list of StageRecord
        Total power after every stage update.
    final : BeamformerSet, optional
        Last accepted point; absent when the run failed before producing one.
    feasibility : FeasibilityReport, optional
        Audit of ``final`` against the scheme's own targets.
    status : ReportStatus
    failure_reason : str, optional
        Error class name, or ``MonotonicityBreach``.
    dropped : bool
        The failure marks the draw as infeasible for this scheme rather than as a solver fault.
    """
    model_config = ConfigDict(frozen=True)

    scheme: str
    powers: List[float] = Field(default_factory=list)
    stages: List[StageRecord] = Field(default_factory=list)
    final: Optional[BeamformerSet] = None
    feasibility: Optional[FeasibilityReport] = None
    status: ReportStatus
    failure_reason: Optional[str] = None
    dropped: bool = False
    iterations: int = Field(0, description="Completed outer iterations")
    wall_time_s: float = Field(0.0, description="Wall-clock duration of the run")
    conic_solves: int = Field(0, description="Conic programs submitted")
    sca_iterations: int = Field(0, description="SCA steps across both relay subproblems")
    flagged_iterations: List[int] = Field(default_factory=list, description="Outer iterations with a kept stage")

    @property
    def final_power(self) -> Optional[float]:
        return self.powers[-1] if self.powers else None

    @property
    def status_label(self) -> str:
        """``Converged``, ``MaxIters`` or ``Failed(reason)``."""
        if self.status == ReportStatus.FAILED:
            return f"Failed({self.failure_reason})"
        return self.status.value

    @property
    def succeeded(self) -> bool:
        return self.status != ReportStatus.FAILED
