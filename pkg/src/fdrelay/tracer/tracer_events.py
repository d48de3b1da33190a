"""
Tracer event types recorded while solving.
"""
import uuid
from datetime import datetime
from typing import Optional

from pydantic import BaseModel, Field


class TracerEvent(BaseModel):
    """
    Base class for all tracer events.

    Tracer events are observations of solver progress: they never influence the computation they describe.
    """
    source: type = Field(..., description="The component that emitted the event")
    timestamp: float = Field(..., description="Timestamp when the event occurred")
    correlation_id: str = Field(
        default_factory=lambda: str(uuid.uuid4()),
        description="UUID string shared by every event of one solve report"
    )

    def printable_summary(self) -> str:
        """
        Return a formatted string summary of the event.

        Returns
        -------
        str
            A formatted string with the event information.
        """
        event_time = datetime.fromtimestamp(self.timestamp).strftime("%H:%M:%S.%f")[:-3]
        return f"[{event_time}] {type(self).__name__} (correlation_id: {self.correlation_id})"


class ConeSolveTracerEvent(TracerEvent):
    """
    Records one call into the conic solver.
    """
    label: str = Field(..., description="Which subproblem built the program")
    n_vars: int = Field(..., description="Number of real decision variables")
    n_constraints: int = Field(..., description="Number of linear and cone constraints")
    status: str = Field(..., description="Optimal, Infeasible or NumericFailure")
    objective: Optional[float] = Field(None, description="Optimal objective, when solved")
    tolerance: float = Field(..., description="Requested solver tolerance")
    retried: bool = Field(False, description="True when the result comes from the relaxed-tolerance retry")
    solve_duration_ms: Optional[float] = Field(None, description="Wall-clock time spent in the solver")

    def printable_summary(self) -> str:
        summary = f"{super().printable_summary()}\n   {self.label}: {self.status}"
        summary += f" ({self.n_vars} vars, {self.n_constraints} constraints)"
        if self.objective is not None:
            summary += f"\n   Objective: {self.objective:.9g}"
        if self.retried:
            summary += "\n   Retried with relaxed tolerance"
        if self.solve_duration_ms is not None:
            summary += f"\n   Duration: {self.solve_duration_ms:.2f}ms"
        return summary


class ScaStepTracerEvent(TracerEvent):
    """
    Records one successive-convex-approximation step for the relay beamformers.
    """
    block: str = Field(..., description="Which beamformer the SCA loop updates (v or w)")
    iteration: int = Field(..., description="SCA iteration index, starting at 1")
    objective: float = Field(..., description="Subproblem objective after the step")
    accepted: bool = Field(..., description="False when the step was rejected and the loop stopped")

    def printable_summary(self) -> str:
        verdict = "accepted" if self.accepted else "rejected"
        return (f"{super().printable_summary()}\n   SCA {self.block} step {self.iteration} {verdict}"
                f"\n   Objective: {self.objective:.9g}")


class StageTracerEvent(TracerEvent):
    """
    Records the total transmit power after one stage of an outer alternating-optimization iteration.
    """
    scheme: str = Field(..., description="Scheme being solved")
    outer_iteration: int = Field(..., description="Outer iteration index, starting at 1")
    stage: str = Field(..., description="Updated block: v, w, f or u")
    total_power: float = Field(..., description="Total transmit power in watts after the stage")

    def printable_summary(self) -> str:
        return (f"{super().printable_summary()}\n   {self.scheme} iteration {self.outer_iteration} stage {self.stage}"
                f"\n   Total power: {self.total_power:.9g} W")
