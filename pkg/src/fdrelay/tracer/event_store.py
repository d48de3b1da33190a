from typing import Callable, List, Optional, Type

from fdrelay.tracer.tracer_events import TracerEvent


class EventStore:
    """
    Append-only store of tracer events with simple queries.
    """
    def __init__(self, on_store_callback: Optional[Callable[[TracerEvent], None]] = None):
        """
        Initialize an EventStore.

        Parameters
        ----------
        on_store_callback : Callable[[TracerEvent], None], optional
            Called with every event after it is stored.
        """
        self.events = []
        self.on_store_callback = on_store_callback

    def store(self, event: TracerEvent) -> None:
        self.events.append(event)
        if self.on_store_callback is not None:
            self.on_store_callback(event)

    def get_events(
            self,
            event_type: Optional[Type[TracerEvent]] = None,
            start_time: Optional[float] = None,
            end_time: Optional[float] = None,
            filter_func: Optional[Callable[[TracerEvent], bool]] = None,
            correlation_id: Optional[str] = None) -> List[TracerEvent]:
        """
        Get events, optionally filtered by type, time range, solve and a custom predicate.

        Parameters
        ----------
        event_type : Type[TracerEvent], optional
            Keep only instances of this type.
        start_time : float, optional
            Keep events with timestamp >= start_time.
        end_time : float, optional
            Keep events with timestamp <= end_time.
        filter_func : Callable[[TracerEvent], bool], optional
            Keep events for which this returns True.
        correlation_id : str, optional
            Keep the events of one solve.

        Returns
        -------
        List[TracerEvent]
        """
        result = self.events
        if event_type is not None:
            result = [e for e in result if isinstance(e, event_type)]
        if start_time is not None:
            result = [e for e in result if e.timestamp >= start_time]
        if end_time is not None:
            result = [e for e in result if e.timestamp <= end_time]
        if correlation_id is not None:
            result = [e for e in result if e.correlation_id == correlation_id]
        if filter_func is not None:
            result = [e for e in result if filter_func(e)]
        return list(result)
