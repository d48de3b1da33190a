import pytest
from pydantic import ValidationError

from fdrelay.ao.config import AoConfig


class DescribeAoConfig:

    def should_default_to_the_published_iteration_caps(self):
        cfg = AoConfig()

        assert cfg.max_outer == 30
        assert cfg.sca_max == 20
        assert cfg.tol_outer_rel == 1e-4
        assert cfg.solver_tol == 1e-8
        assert cfg.audit_minorants is False

    def should_reject_an_outer_tolerance_below_solver_noise(self):
        with pytest.raises(ValidationError):
            AoConfig(tol_outer_rel=1e-9, solver_tol=1e-8)

    def should_reject_nonpositive_caps(self):
        with pytest.raises(ValidationError):
            AoConfig(max_outer=0)

    def should_accept_overrides(self):
        cfg = AoConfig(max_outer=5, tol_outer_rel=1e-3, monotonicity_slack=1e-6)

        assert cfg.max_outer == 5
        assert cfg.monotonicity_slack == 1e-6
