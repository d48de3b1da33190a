from fdrelay.tracer import NullTracer, null_tracer
from fdrelay.tracer.event_store import EventStore
from fdrelay.tracer.tracer_events import ConeSolveTracerEvent, ScaStepTracerEvent, StageTracerEvent
from fdrelay.tracer.tracer_system import TracerSystem


class DescribeTracerSystem:

    def should_create_a_default_event_store(self):
        tracer = TracerSystem()

        assert isinstance(tracer.event_store, EventStore)
        assert tracer.enabled is True

    def should_use_a_provided_event_store(self):
        event_store = EventStore()

        assert TracerSystem(event_store=event_store).event_store is event_store

    def should_record_a_cone_solve(self):
        tracer = TracerSystem()

        tracer.record_cone_solve("user-transmit", n_vars=9, n_constraints=2, status="Optimal", tolerance=1e-8,
                                 objective=0.25, correlation_id="run-1")

        events = tracer.get_events(event_type=ConeSolveTracerEvent)
        assert len(events) == 1
        assert events[0].label == "user-transmit"
        assert events[0].objective == 0.25
        assert events[0].correlation_id == "run-1"
        assert "user-transmit: Optimal" in events[0].printable_summary()

    def should_record_sca_steps_and_stages(self):
        tracer = TracerSystem()

        tracer.record_sca_step("w", iteration=2, objective=0.5, accepted=False)
        tracer.record_stage("ZfFD", outer_iteration=3, stage="u", total_power=2e-3)

        step = tracer.get_events(event_type=ScaStepTracerEvent)[0]
        stage = tracer.get_events(event_type=StageTracerEvent)[0]
        assert "rejected" in step.printable_summary()
        assert stage.scheme == "ZfFD"
        assert stage.total_power == 2e-3

    def should_return_the_stage_powers_of_one_solve(self):
        tracer = TracerSystem()
        tracer.record_stage("ProposedFD", outer_iteration=1, stage="v", total_power=3.0, correlation_id="a")
        tracer.record_stage("ZfFD", outer_iteration=1, stage="v", total_power=9.0, correlation_id="b")
        tracer.record_stage("ProposedFD", outer_iteration=1, stage="w", total_power=2.0, correlation_id="a")

        assert tracer.stage_powers("a") == [3.0, 2.0]
        assert tracer.stage_powers("missing") == []

    def should_generate_a_correlation_id_when_none_is_given(self):
        tracer = TracerSystem()

        tracer.record_stage("ProposedFD", outer_iteration=1, stage="v", total_power=1.0)

        assert len(tracer.get_events()[0].correlation_id) == 36

    def should_not_record_when_disabled(self):
        tracer = TracerSystem(enabled=False)

        tracer.record_stage("ProposedFD", outer_iteration=1, stage="v", total_power=1.0)

        assert tracer.get_events() == []


class DescribeNullTracer:

    def should_be_a_shared_singleton(self):
        assert isinstance(null_tracer, NullTracer)
        assert null_tracer.enabled is False

    def should_discard_everything(self):
        null_tracer.record_cone_solve("relay-transmit", n_vars=1, n_constraints=0, status="Optimal", tolerance=1e-8)
        null_tracer.record_sca_step("v", iteration=1, objective=1.0, accepted=True)
        null_tracer.record_stage("ProposedFD", outer_iteration=1, stage="v", total_power=1.0)

        assert null_tracer.get_events() == []
        assert null_tracer.stage_powers("any") == []
