"""
NullTracer: the default tracer, so solver code never checks whether tracing is on.
"""
from typing import Any, Callable, List, Optional, Type

from fdrelay.tracer.tracer_events import TracerEvent


class NullTracer:
    """
    A TracerSystem look-alike that discards everything and answers every query with nothing.
    """

    def __init__(self):
        self.enabled = False
        self.event_store = None

    def record_event(self, event: TracerEvent) -> None:
        pass

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
        pass

    def record_sca_step(self,
                        block: str,
                        iteration: int,
                        objective: float,
                        accepted: bool,
                        source: Any = None,
                        correlation_id: str = None) -> None:
        pass

    def record_stage(self,
                     scheme: str,
                     outer_iteration: int,
                     stage: str,
                     total_power: float,
                     source: Any = None,
                     correlation_id: str = None) -> None:
        pass

    def get_events(
            self,
            event_type: Optional[Type[TracerEvent]] = None,
            start_time: Optional[float] = None,
            end_time: Optional[float] = None,
            filter_func: Optional[Callable[[TracerEvent], bool]] = None,
            correlation_id: Optional[str] = None) -> List[TracerEvent]:
        return []

    def stage_powers(self, correlation_id: str) -> List[float]:
        return []
