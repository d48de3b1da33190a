"""
Tracing of solver progress: conic solves, SCA steps and AO stages.
"""
from .event_store import EventStore  # noqa: F401
from .null_tracer import NullTracer
from .tracer_events import ConeSolveTracerEvent, ScaStepTracerEvent, StageTracerEvent, TracerEvent  # noqa: F401
from .tracer_system import TracerSystem  # noqa: F401

# Shared no-op tracer used as the default everywhere
null_tracer = NullTracer()
