import math

import pandas as pd
import pytest

from fdrelay.bench.harness import ROW_COLUMNS
from fdrelay.bench.summary import hard_failure_rates, mean_power_dbm, summarize
from fdrelay.errors import EmptyInputError


def rows(*entries):
    return pd.DataFrame([dict(zip(ROW_COLUMNS, entry)) for entry in entries], columns=ROW_COLUMNS)


class DescribeMeanPowerDbm:

    def should_average_in_watts(self):
        assert mean_power_dbm([0.0, 10.0]) == pytest.approx(10.0 * math.log10(5.5), abs=1e-9)

    def should_skip_missing_powers(self):
        assert mean_power_dbm([float("nan"), 3.0]) == pytest.approx(3.0)


class DescribeSummarize:

    def should_average_two_runs_in_the_linear_domain(self):
        table = rows((10.0, "ProposedFD", 0, 0.0, 4, "Converged", False),
                     (10.0, "ProposedFD", 1, 10.0, 6, "MaxIters", False))

        summary = summarize(table)

        assert summary.loc[0, "mean_power_dbm"] == pytest.approx(7.4036, abs=1e-4)
        assert summary.loc[0, "mean_iters"] == 5.0
        assert summary.loc[0, "drop_rate"] == 0.0

    def should_mark_an_all_dropped_cell_as_absent(self):
        table = rows((6.0, "ZfFD", 0, float("nan"), 0, "Failed(InfeasibleDirectionError)", True),
                     (6.0, "ZfFD", 1, float("nan"), 2, "Failed(RankDeficientError)", True))

        summary = summarize(table)

        assert math.isnan(summary.loc[0, "mean_power_dbm"])
        assert summary.loc[0, "drop_rate"] == 1.0

    def should_return_a_single_run_unchanged(self):
        summary = summarize(rows((2.0, "IdealFD", 0, -12.5, 3, "Converged", False)))

        assert summary.loc[0, "mean_power_dbm"] == pytest.approx(-12.5)

    def should_keep_one_line_per_target_and_scheme(self):
        table = rows((2.0, "ZfFD", 0, 1.0, 1, "Converged", False),
                     (2.0, "IdealFD", 0, 1.0, 1, "Converged", False),
                     (6.0, "ZfFD", 0, 1.0, 1, "Converged", False))

        summary = summarize(table)

        assert list(zip(summary["theta_db"], summary["scheme"])) == [(2.0, "IdealFD"), (2.0, "ZfFD"), (6.0, "ZfFD")]

    def should_refuse_empty_input(self):
        with pytest.raises(EmptyInputError):
            summarize(rows())


class DescribeHardFailureRates:

    def should_count_failures_that_were_not_dropped(self):
        table = rows((10.0, "ProposedFD", 0, 1.0, 3, "Converged", False),
                     (10.0, "ProposedFD", 1, float("nan"), 2, "Failed(NumericFailureError)", False),
                     (10.0, "ZfFD", 0, float("nan"), 0, "Failed(InfeasibleDirectionError)", True),
                     (10.0, "ZfFD", 1, 2.0, 4, "OracleMismatch", False))

        assert hard_failure_rates(table) == {"ProposedFD": 0.5, "ZfFD": 0.5}
