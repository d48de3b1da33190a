import json

import pytest
from pydantic import ValidationError

from fdrelay.baselines import SchemeKind
from fdrelay.bench.experiment import ExperimentSpec
from fdrelay.errors import ConfigError


class DescribeExperimentSpec:

    def should_default_to_the_published_setup(self):
        spec = ExperimentSpec()

        assert spec.dims.m_r == 4
        assert spec.dims.n_r == 2
        assert spec.n_runs == 100
        assert spec.schemes == list(SchemeKind)
        assert spec.budget(10.0).sigma2 == pytest.approx(1e-6)
        assert spec.budget(10.0).theta == pytest.approx((10.0, 10.0))
        assert spec.budget(10.0).rho == 1e-4

    def should_reject_unknown_keys(self):
        with pytest.raises(ValidationError):
            ExperimentSpec(n_runs=5, runs=5)

    def should_reject_an_empty_sweep(self):
        with pytest.raises(ValidationError):
            ExperimentSpec(theta_db_list=[])

    def should_parse_scheme_names(self):
        spec = ExperimentSpec(schemes="zffd,ProposedFD")

        assert spec.schemes == [SchemeKind.ZF_FD, SchemeKind.PROPOSED_FD]

    def should_apply_ao_overrides(self):
        cfg = ExperimentSpec(max_outer=7, tol_outer_rel=1e-3).ao_config()

        assert cfg.max_outer == 7
        assert cfg.tol_outer_rel == 1e-3
        assert cfg.sca_max == 20

    def should_reject_inconsistent_ao_overrides(self):
        with pytest.raises(ValidationError):
            ExperimentSpec(tol_outer_rel=1e-10)

    def should_ignore_missing_overrides(self):
        spec = ExperimentSpec(seed=4).with_overrides(seed=None, n_runs=3)

        assert spec.seed == 4
        assert spec.n_runs == 3


class DescribeFromJson:

    def should_read_a_flat_document(self, tmp_path):
        path = tmp_path / "spec.json"
        path.write_text(json.dumps({"n_runs": 2, "theta_db_list": [6, 10], "schemes": ["FdBaseline"]}))

        spec = ExperimentSpec.from_json(path)

        assert spec.n_runs == 2
        assert spec.theta_db_list == [6.0, 10.0]
        assert spec.schemes == [SchemeKind.FD_BASELINE]

    def should_report_a_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            ExperimentSpec.from_json(tmp_path / "absent.json")

    def should_report_malformed_json(self, tmp_path):
        path = tmp_path / "spec.json"
        path.write_text("{n_runs: 2")

        with pytest.raises(ConfigError):
            ExperimentSpec.from_json(path)

    def should_report_unknown_keys(self, tmp_path):
        path = tmp_path / "spec.json"
        path.write_text(json.dumps({"n_run": 2}))

        with pytest.raises(ConfigError):
            ExperimentSpec.from_json(path)

    def should_require_an_object(self, tmp_path):
        path = tmp_path / "spec.json"
        path.write_text("[1, 2]")

        with pytest.raises(ConfigError):
            ExperimentSpec.from_json(path)
