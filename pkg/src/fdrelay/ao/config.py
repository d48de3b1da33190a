from pydantic import BaseModel, Field, model_validator


class AoConfig(BaseModel):
    """
    Configuration of the alternating optimization and of its inner solvers.

    Attributes
    ----------
    max_outer : int
        Cap on outer iterations (one pass over v, w, f and u). Defaults to 30.
    sca_max : int
        Cap on SCA steps inside each relay subproblem. Defaults to 20.
    tol_outer_rel : float
        Stop when one outer iteration lowers the total power by less than this fraction. Defaults to 1e-4.
    tol_sca_rel : float
        Same rule for the SCA inner loops. Defaults to 1e-4.
    solver_tol : float
        Gap and feasibility tolerance handed to the conic solver. Defaults to 1e-8.
    monotonicity_slack : float
        Largest relative power increase tolerated between consecutive stages before the run is failed with
        MonotonicityBreach. Defaults to 1e-7.
    audit_minorants : bool
        Audit the tangent minorants at every SCA reference point. Defaults to False.
    """
    max_outer: int = Field(
        default=30,
        gt=0,
        description="Maximum outer AO iterations"
    )
    sca_max: int = Field(
        default=20,
        gt=0,
        description="Maximum SCA steps per relay subproblem"
    )
    tol_outer_rel: float = Field(
        default=1e-4,
        gt=0.0,
        description="Relative total-power improvement that ends the AO"
    )
    tol_sca_rel: float = Field(
        default=1e-4,
        gt=0.0,
        description="Relative relay-power improvement that ends an SCA run"
    )
    solver_tol: float = Field(
        default=1e-8,
        gt=0.0,
        description="Conic solver tolerance"
    )
    monotonicity_slack: float = Field(
        default=1e-7,
        gt=0.0,
        description="Relative stage-to-stage power increase treated as solver noise"
    )
    audit_minorants: bool = Field(
        default=False,
        description="Run the minorant audit at every SCA reference"
    )

    @model_validator(mode="after")
    def _outer_tolerance_above_solver_noise(self):
        if self.tol_outer_rel < self.solver_tol:
            raise ValueError("tol_outer_rel must not be below solver_tol")
        return self
