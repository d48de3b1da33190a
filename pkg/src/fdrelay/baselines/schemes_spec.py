import numpy as np
import pytest

from fdrelay.baselines.schemes import SchemeKind, hd_target, make_ideal, scheme_inputs
from fdrelay.errors import DomainError
from fdrelay.model.closed_form import forwarded_gains, loop_gain, relay_power
from fdrelay.model.scenarios import random_beamformers
from fdrelay.model.system import LinkBudget, SystemDims, generate_channels


def draw(seed: int = 0):
    rng = np.random.default_rng(seed)
    budget = LinkBudget(sigma2=0.01, rho=1.0, kappa=0.1, theta=(2.0, 3.0))
    return rng, generate_channels(rng, SystemDims(), budget), budget


class DescribeHdTarget:

    def should_double_the_rate_at_ten_db(self):
        assert hd_target(10.0) == pytest.approx(120.0)

    def should_map_one_to_three(self):
        assert hd_target(1.0) == pytest.approx(3.0)

    def should_vanish_with_the_target(self):
        assert hd_target(0.0) == 0.0
        assert hd_target(1e-9) == pytest.approx(2e-9)

    def should_reject_a_negative_target(self):
        with pytest.raises(DomainError):
            hd_target(-0.5)


class DescribeMakeIdeal:

    def should_zero_every_self_interference_channel(self):
        _, ch, _ = draw()

        ideal = make_ideal(ch)

        assert not ideal.h_rr.any()
        assert not ideal.h_11.any()
        assert not ideal.h_22.any()
        assert np.array_equal(ideal.h_1r, ch.h_1r)
        assert np.array_equal(ideal.h_r2, ch.h_r2)

    def should_open_the_relay_loop(self):
        rng, ch, budget = draw(1)
        bf = random_beamformers(rng, SystemDims(), scale=10.0)

        ideal = make_ideal(ch)

        assert loop_gain(bf.w, bf.v, ideal.h_rr) == 0.0
        b_1, b_2 = forwarded_gains(bf, ideal)
        expected = np.vdot(bf.v, bf.v).real * (b_1 + b_2 + budget.sigma2 * np.vdot(bf.w, bf.w).real)
        assert relay_power(bf, ideal, budget.sigma2) == pytest.approx(expected, rel=1e-12)


class DescribeSchemeKind:

    def should_parse_names_without_regard_to_case(self):
        assert SchemeKind.parse("zffd") is SchemeKind.ZF_FD
        assert SchemeKind.parse(" ProposedFD ") is SchemeKind.PROPOSED_FD

    def should_reject_unknown_names(self):
        with pytest.raises(ValueError):
            SchemeKind.parse("TimeSharing")

    def should_mark_only_the_baselines_as_fixed_points(self):
        fixed = {kind for kind in SchemeKind if not kind.optimizes}

        assert fixed == {SchemeKind.FD_BASELINE, SchemeKind.HALF_DUPLEX_BASELINE}


class DescribeSchemeInputs:

    def should_pass_the_proposed_scheme_through(self):
        _, ch, budget = draw()

        scheme_ch, scheme_budget = scheme_inputs(SchemeKind.PROPOSED_FD, ch, budget)

        assert scheme_ch is ch
        assert scheme_budget is budget

    def should_use_ideal_channels_at_full_duplex_targets_for_ideal_fd(self):
        _, ch, budget = draw()

        scheme_ch, scheme_budget = scheme_inputs(SchemeKind.IDEAL_FD, ch, budget)

        assert not scheme_ch.h_rr.any()
        assert scheme_budget.theta == budget.theta

    def should_raise_the_targets_for_half_duplex(self):
        _, ch, budget = draw()

        scheme_ch, scheme_budget = scheme_inputs(SchemeKind.HALF_DUPLEX_AO, ch, budget)

        assert not scheme_ch.h_11.any()
        assert scheme_budget.theta == pytest.approx((8.0, 15.0))
        assert scheme_budget.sigma2 == budget.sigma2
