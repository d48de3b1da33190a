import json
from pathlib import Path
from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from fdrelay.ao.config import AoConfig
from fdrelay.baselines import SchemeKind
from fdrelay.errors import ConfigError
from fdrelay.model.system import LinkBudget, SystemDims
from fdrelay.model.units import db_to_linear, dbm_to_watts

AO_OVERRIDES = ("max_outer", "sca_max", "tol_outer_rel", "tol_sca_rel", "solver_tol", "monotonicity_slack")


class ExperimentSpec(BaseModel):
    """
    A Monte-Carlo experiment, read from a flat JSON document.

    Attributes
    ----------
    m_r, m_1, m_2, n_r, n_1, n_2 : int
        Antenna counts. Default to four relay transmit antennas and two everywhere else.
    rho : float
        Per-entry channel variance. Defaults to 1e-4.
    kappa : float
        Residual self-interference amplitude coefficient. Defaults to 0.1.
    sigma2_dbm : float
        Noise power at every receiver. Defaults to -30 dBm.
    theta_db_list : list of float
        SINR targets to sweep, applied to both users. Defaults to 2, 6, 10 and 14 dB.
    n_runs : int
        Channel draws per target. Defaults to 100.
    seed : int
        Root seed; draw ``r`` uses ``SeedSequence([seed, r])`` whatever the target and scheme.
    schemes : list of SchemeKind
        Schemes to run on every draw. Defaults to all of them.
    oracle_audit : bool
        Re-check every final point against the time-domain simulators.
    workers : int
        Processes used for the draws. Defaults to 1.
    oracle_steps : int
        Simulation horizon of the audit. Defaults to 200000.

    ``max_outer``, ``sca_max``, ``tol_outer_rel``, ``tol_sca_rel``, ``solver_tol`` and ``monotonicity_slack`` override
    the matching :class:`fdrelay.ao.AoConfig` defaults when present.
    """
    model_config = ConfigDict(extra="forbid", frozen=True)

    m_r: int = Field(4, ge=1)
    m_1: int = Field(2, ge=1)
    m_2: int = Field(2, ge=1)
    n_r: int = Field(2, ge=1)
    n_1: int = Field(2, ge=1)
    n_2: int = Field(2, ge=1)
    rho: float = Field(1e-4, gt=0.0, description="Per-entry channel variance")
    kappa: float = Field(0.1, ge=0.0, le=1.0, description="Residual self-interference coefficient")
    sigma2_dbm: float = Field(-30.0, description="Noise power in dBm")
    theta_db_list: List[float] = Field(default_factory=lambda: [2.0, 6.0, 10.0, 14.0], min_length=1,
                                       description="SINR targets in dB")
    n_runs: int = Field(100, ge=1, description="Channel draws per target")
    seed: int = Field(0, ge=0, description="Root seed")
    schemes: List[SchemeKind] = Field(default_factory=lambda: list(SchemeKind), min_length=1,
                                      description="Schemes run on every draw")
    oracle_audit: bool = Field(False, description="Check final points against the time-domain simulators")
    workers: int = Field(1, ge=1, description="Worker processes")
    oracle_steps: int = Field(200_000, ge=20_000, description="Audit simulation horizon in samples")

    max_outer: Optional[int] = None
    sca_max: Optional[int] = None
    tol_outer_rel: Optional[float] = None
    tol_sca_rel: Optional[float] = None
    solver_tol: Optional[float] = None
    monotonicity_slack: Optional[float] = None

    @field_validator("schemes", mode="before")
    @classmethod
    def _parse_schemes(cls, value):
        if isinstance(value, str):
            value = value.split(",")
        return [SchemeKind.parse(item) if isinstance(item, str) else item for item in value]

    @model_validator(mode="after")
    def _valid_ao_overrides(self):
        self.ao_config()
        return self

    @property
    def dims(self) -> SystemDims:
        return SystemDims(m_r=self.m_r, m_1=self.m_1, m_2=self.m_2, n_r=self.n_r, n_1=self.n_1, n_2=self.n_2)

    def budget(self, theta_db: float) -> LinkBudget:
        theta = db_to_linear(theta_db)
        return LinkBudget(sigma2=dbm_to_watts(self.sigma2_dbm), theta=(theta, theta), rho=self.rho, kappa=self.kappa)

    def ao_config(self) -> AoConfig:
        overrides = {name: getattr(self, name) for name in AO_OVERRIDES if getattr(self, name) is not None}
        return AoConfig(**overrides)

    def with_overrides(self, **changes) -> "ExperimentSpec":
        """Validated copy with the given fields replaced; ``None`` values are ignored."""
        changes = {key: value for key, value in changes.items() if value is not None}
        return ExperimentSpec.model_validate({**self.model_dump(), **changes})

    @classmethod
    def from_json(cls, path) -> "ExperimentSpec":
        """
        Read a spec file.

        Raises
        ------
        ConfigError
            If the file is missing, is not a JSON object or fails validation.
        """
        try:
            document = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as error:
            raise ConfigError("Cannot read experiment spec", path=str(path), reason=str(error)) from error
        if not isinstance(document, dict):
            raise ConfigError("Experiment spec must be a JSON object", path=str(path))
        try:
            return cls.model_validate(document)
        except ValidationError as error:
            raise ConfigError("Invalid experiment spec", path=str(path), reason=str(error)) from error
