"""
TracerSystem records solver progress events for later inspection.
"""
import time
from typing import Any, Callable, List, Optional, Type

import structlog

from fdrelay.tracer.event_store import EventStore
from fdrelay.tracer.tracer_events import ConeSolveTracerEvent, ScaStepTracerEvent, StageTracerEvent, TracerEvent

logger = structlog.get_logger()


class TracerSystem:
    """
    Central system for capturing and querying tracer events.

    Pass one to :func:`fdrelay.ao.run_ao` (or any solver entry point taking ``tracer``) to collect every conic solve,
    SCA step and AO stage of a run.
    """

    def __init__(self, event_store: Optional[EventStore] = None, enabled: bool = True):
        """
        Parameters
        ----------
        event_store : EventStore, optional
            Where events go. A new EventStore is created when omitted.
        enabled : bool, default=True
            When False nothing is recorded.
        """
        self.event_store = event_store or EventStore()
        self.enabled = enabled

    def record_event(self, event: TracerEvent) -> None:
        if not self.enabled:
            return
        self.event_store.store(event)

    def record_cone_solve(self,
                          label: str,
                          n_vars: int,
                          n_constraints: int,
                          status: str,
                          tolerance: float,
                          objective: Optional[float] = None,
                          retried: bool = False,
                          solve_duration_ms: Optional[float] = None,
                          source: Any = None,
                          correlation_id: str = None) -> None:
        """
        Record a conic solve.

        Parameters
        ----------
        label : str
            Subproblem that built the program.
        n_vars, n_constraints : int
            Program size.
        status : str
            Solver outcome.
        tolerance : float
            Requested solver tolerance.
        objective : float, optional
            Objective value when solved.
        retried : bool
            Whether this is the relaxed-tolerance retry.
        solve_duration_ms : float, optional
            Time spent in the solver.
        source : Any, optional
            Emitting component; defaults to TracerSystem.
        correlation_id : str, optional
            Shared id of the run.
        """
        if not self.enabled:
            return
        self.record_event(ConeSolveTracerEvent(
            source=source or type(self),
            timestamp=time.time(),
            label=label,
            n_vars=n_vars,
            n_constraints=n_constraints,
            status=status,
            objective=objective,
            tolerance=tolerance,
            retried=retried,
            solve_duration_ms=solve_duration_ms,
            **self._correlation(correlation_id),
        ))

    def record_sca_step(self,
                        block: str,
                        iteration: int,
                        objective: float,
                        accepted: bool,
                        source: Any = None,
                        correlation_id: str = None) -> None:
        if not self.enabled:
            return
        self.record_event(ScaStepTracerEvent(
            source=source or type(self),
            timestamp=time.time(),
            block=block,
            iteration=iteration,
            objective=objective,
            accepted=accepted,
            **self._correlation(correlation_id),
        ))

    def record_stage(self,
                     scheme: str,
                     outer_iteration: int,
                     stage: str,
                     total_power: float,
                     source: Any = None,
                     correlation_id: str = None) -> None:
        if not self.enabled:
            return
        self.record_event(StageTracerEvent(
            source=source or type(self),
            timestamp=time.time(),
            scheme=scheme,
            outer_iteration=outer_iteration,
            stage=stage,
            total_power=total_power,
            **self._correlation(correlation_id),
        ))

    def get_events(
            self,
            event_type: Optional[Type[TracerEvent]] = None,
            start_time: Optional[float] = None,
            end_time: Optional[float] = None,
            filter_func: Optional[Callable[[TracerEvent], bool]] = None,
            correlation_id: Optional[str] = None) -> List[TracerEvent]:
        return self.event_store.get_events(event_type=event_type or TracerEvent, start_time=start_time,
                                           end_time=end_time, filter_func=filter_func,
                                           correlation_id=correlation_id)

    def stage_powers(self, correlation_id: str) -> List[float]:
        """Total power after every recorded stage of one solve, in stage order."""
        return [event.total_power for event in self.get_events(event_type=StageTracerEvent, correlation_id=correlation_id)]

    @staticmethod
    def _correlation(correlation_id: Optional[str]) -> dict:
        return {"correlation_id": correlation_id} if correlation_id else {}
