import numpy as np

from fdrelay.baselines import init_beamformers
from fdrelay.model.closed_form import sinr
from fdrelay.model.system import USERS
from fdrelay.relay import VSubproblemData, WSubproblemData, v_constraint_slack, w_constraint_slack, sca_v, sca_w
from fdrelay.users import FSubproblemData, mmse_u, f_constraint_slack, solve_f


class DescribeSubproblemSolutionsOnTheOriginalConstraints:

    def should_keep_user_transmit_solutions_feasible(self, draws, reference_budget):
        for ch in draws[:20]:
            bf = init_beamformers(ch, reference_budget)
            data = FSubproblemData.from_beamformers(bf, ch, reference_budget)

            solution = solve_f(data)

            assert f_constraint_slack(data, solution.f_1, solution.f_2) >= -1e-6

    def should_keep_every_relay_iterate_feasible(self, draws, reference_budget):
        for ch in draws[:10]:
            bf = init_beamformers(ch, reference_budget)
            v_data = VSubproblemData.from_beamformers(bf, ch, reference_budget)
            v_state = sca_v(v_data, bf.v)
            assert v_constraint_slack(v_data, v_state.iterate) >= -1e-6

            bf = bf.replace(v=v_state.iterate)
            w_data = WSubproblemData.from_beamformers(bf, ch, reference_budget)
            w_state = sca_w(w_data, bf.w)
            assert w_constraint_slack(w_data, w_state.iterate) >= -1e-6

    def should_beat_ten_thousand_random_receivers(self, draws, reference_budget):
        rng = np.random.default_rng(5)
        sigma2 = reference_budget.sigma2
        for ch in draws[:5]:
            bf = init_beamformers(ch, reference_budget)
            for i in USERS:
                u = mmse_u(i, ch.downlink(i) @ bf.v, ch.user_si(i) @ bf.f(i), sigma2)
                best = sinr(i, bf.with_user(i, u=u), ch, sigma2)
                candidates = rng.standard_normal((10_000, 2)) + 1j * rng.standard_normal((10_000, 2))
                for z in candidates:
                    assert sinr(i, bf.with_user(i, u=z / np.linalg.norm(z)), ch, sigma2) <= best * (1.0 + 1e-12)
