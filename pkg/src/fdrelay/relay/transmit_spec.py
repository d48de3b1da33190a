import numpy as np
import pytest

from fdrelay.errors import DegenerateDirectionError
from fdrelay.model.closed_form import relay_power, sinr
from fdrelay.model.scenarios import random_beamformers, with_loop_gain
from fdrelay.model.system import USERS, LinkBudget, SystemDims, generate_channels
from fdrelay.relay.transmit import (
    VSubproblemData,
    build_phi,
    initial_rho,
    v_constraint_slack,
    v_objective,
    sca_v,
    solve_v_step,
)


def feasible_case(seed: int):
    """A random draw with targets at half the SINRs the random beamformers already reach."""
    rng = np.random.default_rng(seed)
    dims = SystemDims(m_r=3, n_r=2)
    base = LinkBudget(sigma2=0.01, rho=1.0, kappa=0.05, theta=(1.0, 1.0))
    ch = generate_channels(rng, dims, base)
    bf = with_loop_gain(random_beamformers(rng, dims), ch, 0.3)
    budget = base.with_targets(tuple(0.5 * sinr(i, bf, ch, base.sigma2) for i in USERS))
    return bf, ch, budget


def scalar_data(g_rr: float = 0.0) -> VSubproblemData:
    return VSubproblemData(g_1r=2.0, g_2r=3.0, g_11=0.1, g_22=0.2, g_r1=[1.0 + 0.5j], g_r2=[0.8j], g_rr=[g_rr],
                           w_norm2=1.0, sigma2=0.1, theta=(1.0, 2.0))


class DescribeVSubproblemData:

    def should_reproduce_the_closed_form_relay_power(self):
        bf, ch, budget = feasible_case(0)

        data = VSubproblemData.from_beamformers(bf, ch, budget)

        assert v_objective(data, bf.v) == pytest.approx(relay_power(bf, ch, budget.sigma2), rel=1e-12)

    def should_reproduce_the_closed_form_sinr_slack(self):
        bf, ch, budget = feasible_case(1)

        data = VSubproblemData.from_beamformers(bf, ch, budget)

        assert v_constraint_slack(data, bf.v) == pytest.approx(1.0, rel=1e-10)

    def should_report_an_unstable_loop_as_infeasible(self):
        data = scalar_data(g_rr=2.0)

        assert v_constraint_slack(data, np.array([1.0])) == float("-inf")
        assert v_objective(data, np.array([1.0])) == float("inf")


class DescribeBuildPhi:

    def should_isolate_the_downlink_direction_without_a_loop(self):
        data = VSubproblemData(g_1r=0.0, g_2r=1.0, g_11=0.0, g_22=0.0, g_r1=[1.0, 0.0], g_r2=[0.0, 1.0],
                               g_rr=[0.0, 0.0], w_norm2=1.0, sigma2=1.0, theta=(1.0, 1.0))

        assert np.allclose(build_phi(data, 1), np.array([[1.0, 0.0], [0.0, 0.0]]))

    def should_vanish_when_every_gain_is_zero(self):
        data = VSubproblemData(g_1r=0.0, g_2r=0.0, g_11=0.0, g_22=0.0, g_r1=np.zeros(3), g_r2=np.zeros(3),
                               g_rr=np.zeros(3), w_norm2=0.0, sigma2=1.0, theta=(1.0, 1.0))

        assert np.allclose(build_phi(data, 2), np.zeros((3, 3)))

    def should_equal_the_rearranged_constraint_left_side(self):
        """
        Given a random draw
        When v^H Phi_i v is evaluated
        Then it equals |g_Ri^H v|^2 g_{3-i,R} + theta_i (g_ii + sigma2) |g_RR^H v|^2 term by term
        """
        bf, ch, budget = feasible_case(2)
        data = VSubproblemData.from_beamformers(bf, ch, budget)
        v = bf.v

        for i in USERS:
            phi = build_phi(data, i)
            partner = data.g_2r if i == 1 else data.g_1r
            direct = (abs(np.vdot(data.downlink(i), v)) ** 2 * partner
                      + data.kappa(i) * abs(np.vdot(data.g_rr, v)) ** 2)

            assert np.allclose(phi, phi.conj().T)
            assert np.vdot(v, phi @ v).real == pytest.approx(direct, rel=1e-12)
            assert np.linalg.matrix_rank(phi) <= 2


class DescribeSolveVStep:

    def should_return_a_point_feasible_for_the_original_constraints(self):
        bf, ch, budget = feasible_case(3)
        data = VSubproblemData.from_beamformers(bf, ch, budget)

        step = solve_v_step(data, bf.v, initial_rho(data, bf.v))

        assert v_constraint_slack(data, step.iterate) >= -1e-6
        assert all(r > 0.0 for r in step.rho)

    def should_not_increase_the_relay_power(self):
        bf, ch, budget = feasible_case(4)
        data = VSubproblemData.from_beamformers(bf, ch, budget)

        step = solve_v_step(data, bf.v, initial_rho(data, bf.v))

        assert v_objective(data, step.iterate) <= v_objective(data, bf.v) * (1.0 + 1e-7)

    def should_report_the_relay_power_of_its_own_iterate(self):
        bf, ch, budget = feasible_case(5)
        data = VSubproblemData.from_beamformers(bf, ch, budget)

        step = solve_v_step(data, bf.v, initial_rho(data, bf.v))

        assert step.objective == pytest.approx(v_objective(data, step.iterate), rel=1e-5)


class DescribeScaV:

    def should_produce_a_nonincreasing_trajectory(self):
        bf, ch, budget = feasible_case(6)
        data = VSubproblemData.from_beamformers(bf, ch, budget)

        state = sca_v(data, bf.v, max_iters=10, tol_rel=1e-6)

        trajectory = state.trajectory
        assert all(later <= earlier * (1.0 + 1e-7) for earlier, later in zip(trajectory, trajectory[1:]))
        assert trajectory[-1] < trajectory[0]
        assert v_constraint_slack(data, state.iterate) >= -1e-6
        assert relay_power(bf.replace(v=state.iterate), ch, budget.sigma2) == pytest.approx(trajectory[-1],
                                                                                          rel=1e-12)

    def should_take_exactly_one_step_with_a_huge_tolerance(self):
        bf, ch, budget = feasible_case(7)
        data = VSubproblemData.from_beamformers(bf, ch, budget)

        state = sca_v(data, bf.v, tol_rel=1e9)

        assert state.iterations == 1

    def should_reach_the_single_antenna_optimum_without_a_loop(self):
        """
        Given one relay antenna and no relay self-interference
        When the relay power is minimized from v = 1
        Then |v|^2 settles on the larger of kappa_i / ((g_{3-i,R} - theta_i sigma2 ||w||^2) |g_Ri|^2)
        """
        data = scalar_data()
        bound_1 = data.kappa(1) / ((data.g_2r - data.theta[0] * data.sigma2) * 1.25)
        bound_2 = data.kappa(2) / ((data.g_1r - data.theta[1] * data.sigma2) * 0.64)
        expected = data.noise_gain * max(bound_1, bound_2)

        state = sca_v(data, np.array([1.0 + 0j]), max_iters=50, tol_rel=1e-10)

        assert state.trajectory[-1] == pytest.approx(expected, rel=1e-5)

    def should_run_the_minorant_audit_when_asked(self):
        bf, ch, budget = feasible_case(8)
        data = VSubproblemData.from_beamformers(bf, ch, budget)

        state = sca_v(data, bf.v, max_iters=2, audit=True)

        assert state.audit_failures == 0

    def should_refuse_a_start_orthogonal_to_a_downlink(self):
        data = VSubproblemData(g_1r=1.0, g_2r=1.0, g_11=0.0, g_22=0.0, g_r1=[0.0, 1.0], g_r2=[1.0, 0.0],
                               g_rr=[0.0, 0.0], w_norm2=1.0, sigma2=0.1, theta=(1.0, 1.0))

        with pytest.raises(DegenerateDirectionError):
            sca_v(data, np.array([1.0, 0.0]))
