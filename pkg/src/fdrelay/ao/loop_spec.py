import numpy as np
import pytest

from fdrelay.ao.config import AoConfig
from fdrelay.ao.loop import StageOutcome, alternate, failed_report, point_report
from fdrelay.ao.report import FINAL_POINT_INFEASIBLE, MONOTONICITY_BREACH, ReportStatus
from fdrelay.baselines.init import init_beamformers
from fdrelay.errors import InfeasibleDirectionError, SubproblemInfeasibleError
from fdrelay.model.closed_form import total_power
from fdrelay.model.system import LinkBudget, SystemDims, generate_channels
from fdrelay.tracer import TracerSystem


@pytest.fixture
def draw():
    rng = np.random.default_rng(60)
    dims = SystemDims()
    budget = LinkBudget(sigma2=0.01, rho=1.0, kappa=0.1, theta=(0.05, 0.05))
    ch = generate_channels(rng, dims, budget)
    bf = init_beamformers(ch, budget.with_targets((4.0, 4.0)))
    return ch, budget, bf


def keep(bf):
    return StageOutcome(bf)


def shrink(bf):
    return StageOutcome(bf.replace(f_1=0.5 * bf.f_1, f_2=0.5 * bf.f_2))


def grow(bf):
    return StageOutcome(bf.replace(f_1=2.0 * bf.f_1))


class DescribeAlternate:

    def should_converge_when_an_iteration_changes_nothing(self, draw):
        ch, budget, bf = draw

        report = alternate("ProposedFD", ch, budget, AoConfig(), bf, [("v", keep), ("w", keep)])

        power = total_power(bf, ch, budget.sigma2)
        assert report.status == ReportStatus.CONVERGED
        assert report.iterations == 1
        assert report.powers == pytest.approx([power, power])
        assert [record.stage for record in report.stages] == ["v", "w"]

    def should_stop_at_the_iteration_cap(self, draw):
        ch, budget, bf = draw
        cfg = AoConfig(max_outer=2, tol_outer_rel=1e-12, solver_tol=1e-12)

        report = alternate("ZfFD", ch, budget, cfg, bf, [("f", shrink)])

        assert report.status == ReportStatus.MAX_ITERS
        assert report.iterations == 2
        assert report.powers[0] > report.powers[1] > report.powers[2]
        assert report.final_power == pytest.approx(total_power(report.final, ch, budget.sigma2))

    def should_fail_a_stage_that_raises_the_power(self, draw):
        """
        Given a stage that doubles a transmit beamformer
        When the loop runs
        Then the run fails with a monotonicity breach and keeps the last accepted point
        """
        ch, budget, bf = draw

        report = alternate("ProposedFD", ch, budget, AoConfig(), bf, [("v", keep), ("f", grow)])

        assert report.status == ReportStatus.FAILED
        assert report.failure_reason == MONOTONICITY_BREACH
        assert np.array_equal(report.final.f_1, bf.f_1)
        assert len(report.powers) == 1

    def should_fail_a_run_that_ends_on_an_infeasible_point(self, draw):
        """
        Given a stage that lowers the power by starving both users of signal
        When the loop stops at the iteration cap
        Then the run is reported failed because the final point misses the SINR targets
        """
        ch, budget, bf = draw

        def starve(current):
            return StageOutcome(current.replace(f_1=0.01 * current.f_1, f_2=0.01 * current.f_2))

        report = alternate("ProposedFD", ch, budget, AoConfig(max_outer=1), bf, [("f", starve)])

        assert not report.feasibility.feasible
        assert report.status == ReportStatus.FAILED
        assert report.status_label == f"Failed({FINAL_POINT_INFEASIBLE})"
        assert not report.dropped
        assert report.powers[1] < report.powers[0]

    def should_turn_a_droppable_stage_error_into_a_dropped_failure(self, draw):
        ch, budget, bf = draw
        error = InfeasibleDirectionError("no direction", direction="v")

        def broken(_):
            raise error

        report = alternate("ZfFD", ch, budget, AoConfig(), bf, [("v", broken)])

        assert report.status_label == "Failed(InfeasibleDirectionError)"
        assert report.dropped
        assert error.context["stage"] == "v"
        assert error.context["outer_iteration"] == 1

    def should_not_drop_solver_failures(self, draw):
        ch, budget, bf = draw

        def broken(_):
            raise SubproblemInfeasibleError("infeasible")

        report = alternate("ProposedFD", ch, budget, AoConfig(), bf, [("w", broken)])

        assert report.failure_reason == "SubproblemInfeasibleError"
        assert not report.dropped

    def should_accumulate_stage_bookkeeping(self, draw):
        ch, budget, bf = draw

        def counted(current):
            return StageOutcome(current, conic_solves=2, sca_iterations=3, flagged=True)

        report = alternate("ProposedFD", ch, budget, AoConfig(), bf, [("v", counted), ("w", counted)])

        assert report.conic_solves == 4
        assert report.sca_iterations == 6
        assert report.flagged_iterations == [1]
        assert all(record.flagged for record in report.stages)

    def should_record_every_stage_on_the_tracer(self, draw, mocker):
        ch, budget, bf = draw
        tracer = mocker.Mock()

        alternate("ProposedFD", ch, budget, AoConfig(), bf, [("v", keep), ("u", keep)], tracer=tracer,
                  correlation_id="draw-3")

        assert tracer.record_stage.call_count == 2
        _, kwargs = tracer.record_stage.call_args
        assert kwargs["stage"] == "u"
        assert kwargs["correlation_id"] == "draw-3"

    def should_trace_the_same_stage_powers_it_reports(self, draw):
        ch, budget, bf = draw
        tracer = TracerSystem()

        report = alternate("ProposedFD", ch, budget, AoConfig(max_outer=3), bf, [("f", shrink), ("u", keep)],
                           tracer=tracer, correlation_id="draw-4")

        assert tracer.stage_powers("draw-4") == [record.total_power for record in report.stages]


class DescribePointReport:

    def should_report_the_point_without_iterations(self, draw):
        ch, budget, bf = draw

        report = point_report("FdBaseline", ch, budget, bf)

        assert report.iterations == 0
        assert report.powers == [total_power(bf, ch, budget.sigma2)]
        assert report.status == ReportStatus.CONVERGED
        assert report.feasibility is not None


class DescribeFailedReport:

    def should_carry_the_error_class_and_drop_flag(self):
        report = failed_report("IdealFD", InfeasibleDirectionError("gone"))

        assert report.status_label == "Failed(InfeasibleDirectionError)"
        assert report.dropped
        assert report.final is None
