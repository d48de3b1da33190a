import numpy as np
import pytest

from fdrelay.ao.config import AoConfig
from fdrelay.ao.driver import run_ao, run_scheme, tighten_ideal_bound
from fdrelay.ao.report import ReportStatus, SolveReport
from fdrelay.baselines import SchemeKind, hd_target, init_beamformers
from fdrelay.errors import DimensionMismatchError, SubproblemInfeasibleError
from fdrelay.model.closed_form import total_power
from fdrelay.model.system import LinkBudget, SystemDims, generate_channels
from fdrelay.users import UserTransmitSolution


def draw(seed: int, dims: SystemDims = SystemDims()):
    budget = LinkBudget(sigma2=0.01, rho=1.0, kappa=0.1, theta=(2.0, 2.0))
    return generate_channels(np.random.default_rng(seed), dims, budget), budget


def passthrough_sca(mocker):
    def state(_, start, **__):
        return mocker.Mock(iterate=start, solves=1, iterations=1, audit_failures=0)
    mocker.patch("fdrelay.ao.driver.sca_v", side_effect=state)
    mocker.patch("fdrelay.ao.driver.sca_w", side_effect=state)


class DescribeRunAo:

    def should_improve_on_the_initialization_point_without_raising_the_power(self):
        """
        Given a random draw and the zero-forcing initialization point
        When the alternating optimization runs
        Then the first iteration already lowers the power, no stage raises it and the final point is feasible
        """
        ch, budget = draw(70)

        report = run_ao(ch, budget, AoConfig(max_outer=3))

        assert report.succeeded
        assert report.scheme == "ProposedFD"
        assert report.powers[1] < report.powers[0]
        previous = report.powers[0]
        for record in report.stages:
            assert record.total_power <= previous * (1.0 + 1e-7)
            previous = record.total_power
        assert report.feasibility.feasible
        assert report.conic_solves > 0
        assert report.sca_iterations > 0

    def should_start_from_the_given_point(self, mocker):
        ch, budget = draw(71)
        passthrough_sca(mocker)
        init = init_beamformers(ch, budget)

        report = run_ao(ch, budget, init=init)

        assert report.powers[0] == pytest.approx(total_power(init, ch, budget.sigma2), rel=1e-12)

    def should_refuse_a_start_point_of_the_wrong_size(self):
        ch, budget = draw(72)
        init = init_beamformers(ch, budget)
        short = init.replace(v=init.v[:2])

        with pytest.raises(DimensionMismatchError) as error:
            run_ao(ch, budget, init=short)

        assert error.value.context["item"] == "v"

    def should_keep_the_user_beamformers_when_their_subproblem_is_infeasible(self, mocker):
        """
        Given a user transmit subproblem that the solver reports infeasible
        When the alternation runs
        Then the previous f_1, f_2 are kept and the iteration is flagged
        """
        ch, budget = draw(72)
        passthrough_sca(mocker)
        mocker.patch("fdrelay.ao.driver.solve_f", side_effect=SubproblemInfeasibleError("infeasible"))
        init = init_beamformers(ch, budget)

        report = run_ao(ch, budget, init=init)

        assert report.status == ReportStatus.CONVERGED
        assert report.flagged_iterations == [1]
        assert np.array_equal(report.final.f_1, init.f_1)
        assert report.conic_solves == 3


    def should_keep_the_user_beamformers_when_the_new_solution_costs_more(self, mocker):
        """
        Given a user transmit solver that returns a feasible point with slightly more power
        When the alternation runs
        Then the previous f_1, f_2 are kept, no iteration is flagged and the power never rises
        """
        ch, budget = draw(74)
        passthrough_sca(mocker)
        init = init_beamformers(ch, budget)

        def costlier(data, **_):
            return UserTransmitSolution(f_1=init.f_1 * 1.001, f_2=init.f_2 * 1.001, objective=0.0)
        mocker.patch("fdrelay.ao.driver.solve_f", side_effect=costlier)

        report = run_ao(ch, budget, init=init)

        assert report.succeeded
        assert np.array_equal(report.final.f_1, init.f_1)
        assert np.array_equal(report.final.f_2, init.f_2)
        assert report.flagged_iterations == []
        assert report.powers[-1] <= report.powers[0] * (1.0 + 1e-12)

class DescribeRunScheme:

    def should_report_the_fd_baseline_without_iterations(self):
        ch, budget = draw(73)

        report = run_scheme(SchemeKind.FD_BASELINE, ch, budget)

        assert report.iterations == 0
        assert report.powers == [pytest.approx(total_power(init_beamformers(ch, budget), ch, budget.sigma2))]
        assert report.feasibility.feasible

    def should_audit_the_half_duplex_baseline_at_doubled_rate_targets(self):
        ch, budget = draw(74)

        report = run_scheme("HalfDuplexBaseline", ch, budget)

        assert [m.target for m in report.feasibility.margins] == pytest.approx([hd_target(2.0)] * 2)
        assert report.feasibility.feasible

    def should_fail_and_drop_when_no_initialization_point_exists(self):
        ch, budget = draw(75, SystemDims(m_1=1))

        report = run_scheme(SchemeKind.PROPOSED_FD, ch, budget)

        assert report.status_label == "Failed(RankDeficientError)"
        assert report.dropped

    def should_hand_zero_forcing_to_its_own_alternation(self, mocker):
        ch, budget = draw(76)
        zf_ao = mocker.patch("fdrelay.ao.driver.zf_ao")

        result = run_scheme(SchemeKind.ZF_FD, ch, budget, tracer=mocker.sentinel.tracer, correlation_id="c")

        assert result is zf_ao.return_value
        args, kwargs = zf_ao.call_args
        assert args[0] is ch
        assert kwargs["tracer"] is mocker.sentinel.tracer

    def should_run_the_ideal_scheme_on_channels_without_self_interference(self, mocker):
        ch, budget = draw(77)
        run = mocker.patch("fdrelay.ao.driver.run_ao")

        run_scheme(SchemeKind.IDEAL_FD, ch, budget)

        args, kwargs = run.call_args
        assert not args[0].h_rr.any()
        assert args[1].theta == budget.theta
        assert kwargs["scheme"] == "IdealFD"

    def should_run_half_duplex_ao_at_doubled_rate_targets(self, mocker):
        ch, budget = draw(78)
        run = mocker.patch("fdrelay.ao.driver.run_ao")

        run_scheme(SchemeKind.HALF_DUPLEX_AO, ch, budget)

        args, _ = run.call_args
        assert args[1].theta == pytest.approx((8.0, 8.0))


class DescribeTightenIdealBound:

    def should_bound_the_full_duplex_run_from_below(self):
        """
        Given the proposed and the ideal scheme run on the same draw
        When the ideal scheme is restarted from the proposed final point
        Then the ideal power is no higher than the proposed power nor the first ideal run
        """
        ch, budget = draw(70)
        cfg = AoConfig(max_outer=3)
        proposed = run_scheme(SchemeKind.PROPOSED_FD, ch, budget, cfg)
        ideal = run_scheme(SchemeKind.IDEAL_FD, ch, budget, cfg)

        result = tighten_ideal_bound(ideal, proposed, ch, budget, cfg)

        assert proposed.succeeded
        assert result.succeeded
        assert result.scheme == "IdealFD"
        assert result.final_power <= proposed.final_power * (1.0 + 1e-6)
        assert result.final_power <= ideal.final_power
        assert result.feasibility.feasible

    def should_keep_the_ideal_run_when_the_full_duplex_run_failed(self, mocker):
        ch, budget = draw(80)
        run = mocker.patch("fdrelay.ao.driver.run_ao")
        ideal = SolveReport(scheme="IdealFD", powers=[1.0], status=ReportStatus.CONVERGED)
        failed = SolveReport(scheme="ProposedFD", status=ReportStatus.FAILED, failure_reason="SolverNumericError")

        result = tighten_ideal_bound(ideal, failed, ch, budget)

        assert result is ideal
        run.assert_not_called()

    def should_keep_the_ideal_run_when_the_restart_costs_more(self, mocker):
        ch, budget = draw(81)
        baseline = run_scheme(SchemeKind.FD_BASELINE, ch, budget)
        ideal = SolveReport(scheme="IdealFD", powers=[1.0], status=ReportStatus.CONVERGED)
        run = mocker.patch("fdrelay.ao.driver.run_ao",
                           return_value=SolveReport(scheme="IdealFD", powers=[5.0], status=ReportStatus.CONVERGED))

        result = tighten_ideal_bound(ideal, baseline, ch, budget)

        assert result is ideal
        args, kwargs = run.call_args
        assert not args[0].h_rr.any()
        assert kwargs["init"] is baseline.final
        assert kwargs["scheme"] == "IdealFD"
