import numpy as np
import pytest

from fdrelay.ao import run_ao
from fdrelay.bench import ExperimentSpec, run_convergence_trace
from fdrelay.bench.harness import trace_draw


class DescribeConvergenceSpeed:

    def should_get_within_one_percent_in_ten_iterations(self, draws, reference_budget, ao_config):
        needed = []
        for ch in draws:
            report = run_ao(ch, reference_budget, ao_config)
            if not report.succeeded:
                continue
            final = report.final_power
            needed.append(next(k for k, power in enumerate(report.powers) if power <= 1.01 * final))

        assert np.median(needed) <= 10

    def should_start_both_schemes_from_the_same_point(self):
        """
        Given the first 10 draws of the trace experiment
        When both schemes run on each draw
        Then iteration 0 carries the same initialization power for both
        """
        spec = ExperimentSpec(n_runs=10, theta_db_list=[10.0], seed=2, schemes=["ProposedFD", "ZfFD"])

        compared = 0
        for run_index in range(spec.n_runs):
            trajectories = trace_draw(spec, run_index)
            proposed, zero_forcing = trajectories["ProposedFD"][0], trajectories["ZfFD"][0]
            if proposed and zero_forcing:
                assert proposed[0] == pytest.approx(zero_forcing[0], rel=1e-9)
                compared += 1

        assert compared > 0

    def should_beat_zero_forcing_from_the_first_iteration(self):
        """
        Given 50 draws at 10 dB
        When the mean power per outer iteration is traced
        Then the proposed scheme is lower from iteration 1 on
        """
        spec = ExperimentSpec(n_runs=50, theta_db_list=[10.0], seed=2, schemes=["ProposedFD", "ZfFD"], workers=4)

        trace = run_convergence_trace(spec)

        proposed = trace[trace["scheme"] == "ProposedFD"]["mean_power_dbm"].to_numpy()
        zero_forcing = trace[trace["scheme"] == "ZfFD"]["mean_power_dbm"].to_numpy()
        steps = min(len(proposed), len(zero_forcing))
        assert np.all(proposed[1:steps] < zero_forcing[1:steps])
        assert np.all(np.diff(proposed) <= 1e-9)
