"""
Real-valued conic programs: a linear objective under linear, second-order-cone and rotated-second-order-cone
constraints.
"""
from enum import Enum
from typing import Dict, List, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from fdrelay.conic.lifting import check_dimension, imag_part_row, lift_complex, real_part_row, unlift
from fdrelay.errors import DimensionMismatchError


class ConeStatus(str, Enum):
    OPTIMAL = "Optimal"
    INFEASIBLE = "Infeasible"
    NUMERIC_FAILURE = "NumericFailure"


class LinearConstraint(BaseModel):
    """``row @ x <= rhs`` or ``row @ x == rhs``."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    row: np.ndarray
    rhs: float
    sense: str = Field("<=", pattern="^(<=|==)$")

    def slack(self, x: np.ndarray) -> float:
        value = float(self.row @ x)
        if self.sense == "==":
            return -abs(value - self.rhs)
        return self.rhs - value


class SocConstraint(BaseModel):
    """``||A x + d|| <= g @ x + h``."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    a: np.ndarray
    d: np.ndarray
    g: np.ndarray
    h: float

    def slack(self, x: np.ndarray) -> float:
        norm = float(np.linalg.norm(self.a @ x + self.d))
        bound = float(self.g @ x + self.h)
        return (bound - norm) / max(1.0, abs(bound), norm)


class RsocConstraint(BaseModel):
    """``||A x + d||^2 <= (p @ x + p0)(q @ x + q0)`` with both factors nonnegative."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    a: np.ndarray
    d: np.ndarray
    p: np.ndarray
    q: np.ndarray
    p0: float = 0.0
    q0: float = 0.0

    def as_soc(self) -> SocConstraint:
        """The equivalent cone ``||[2(Ax + d); P - Q]|| <= P + Q``."""
        return SocConstraint(
            a=np.vstack([2.0 * self.a, (self.p - self.q)[None, :]]),
            d=np.concatenate([2.0 * self.d, [self.p0 - self.q0]]),
            g=self.p + self.q,
            h=self.p0 + self.q0,
        )

    def slack(self, x: np.ndarray) -> float:
        return self.as_soc().slack(x)


Constraint = Union[LinearConstraint, SocConstraint, RsocConstraint]


class ComplexBlock(BaseModel):
    """Position of a lifted complex vector inside the real decision vector."""
    model_config = ConfigDict(frozen=True)

    start: int
    size: int

    @property
    def span(self) -> slice:
        return slice(self.start, self.start + 2 * self.size)

    def value(self, x: np.ndarray) -> np.ndarray:
        return unlift(x[self.span])


class VariableLayout:
    """
    Allocates named real scalars and lifted complex blocks, then builds full-width rows over them.

    Rows are built with keyword terms: ``layout.row(xi=1.0)`` or ``layout.real_part(v, a)``.
    """

    def __init__(self):
        self.size = 0
        self.scalars: Dict[str, int] = {}
        self.blocks: Dict[str, ComplexBlock] = {}

    def scalar(self, name: str) -> int:
        self.scalars[name] = self.size
        self.size += 1
        return self.scalars[name]

    def complex(self, name: str, m: int) -> ComplexBlock:
        """Allocate a complex ``m``-vector as ``2m`` real variables."""
        block = ComplexBlock(start=self.size, size=m)
        self.blocks[name] = block
        self.size += 2 * m
        return block

    def row(self, **scalars: float) -> np.ndarray:
        row = np.zeros(self.size)
        for name, coefficient in scalars.items():
            row[self.scalars[name]] += coefficient
        return row

    def real_part(self, block: ComplexBlock, a: np.ndarray, scale: float = 1.0) -> np.ndarray:
        """Full row for ``scale * Re(a^H z)``."""
        check_dimension(a, block.size)
        row = np.zeros(self.size)
        row[block.span] = scale * real_part_row(a)
        return row

    def quad_norm(self, block: ComplexBlock, a: np.ndarray, scale: float = 1.0) -> np.ndarray:
        """Two full rows whose image has norm ``scale * |a^H z|``."""
        check_dimension(a, block.size)
        rows = np.zeros((2, self.size))
        rows[0, block.span] = scale * real_part_row(a)
        rows[1, block.span] = scale * imag_part_row(a)
        return rows

    def matrix(self, block: ComplexBlock, lifted: np.ndarray) -> np.ndarray:
        """Embed a real map acting on the lifted block."""
        if lifted.shape[1] != 2 * block.size:
            raise DimensionMismatchError("Lifted map does not match the block", expected=2 * block.size,
                                         actual=lifted.shape[1])
        rows = np.zeros((lifted.shape[0], self.size))
        rows[:, block.span] = lifted
        return rows

    def point(self, **values) -> np.ndarray:
        """A full decision vector from named scalar and complex block values."""
        x = np.zeros(self.size)
        for name, value in values.items():
            if name in self.scalars:
                x[self.scalars[name]] = value
            else:
                x[self.blocks[name].span] = lift_complex(value)
        return x


class ConeProgram:
    """
    Builder for ``min c @ x`` over linear, SOC and RSOC constraints.

    Constraint ids are the insertion order and stay valid for :meth:`slack` lookups.
    """

    def __init__(self, n_vars: int, objective: Optional[np.ndarray] = None):
        if n_vars < 0:
            raise DimensionMismatchError("Negative variable count", n_vars=n_vars)
        self.n_vars = n_vars
        self.objective = np.zeros(n_vars)
        self.constraints: List[Constraint] = []
        if objective is not None:
            self.set_objective(objective)

    @property
    def linear_constraints(self) -> List[LinearConstraint]:
        return [c for c in self.constraints if isinstance(c, LinearConstraint)]

    @property
    def soc_constraints(self) -> List[SocConstraint]:
        return [c for c in self.constraints if isinstance(c, SocConstraint)]

    @property
    def rsoc_constraints(self) -> List[RsocConstraint]:
        return [c for c in self.constraints if isinstance(c, RsocConstraint)]

    def set_objective(self, c: np.ndarray) -> None:
        self.objective = self._vector(c, "objective")

    def add_linear(self, row: np.ndarray, rhs: float, sense: str = "<=") -> int:
        return self._append(LinearConstraint(row=self._vector(row, "row"), rhs=self._finite(rhs), sense=sense))

    def add_soc(self, a: np.ndarray, d: np.ndarray, g: np.ndarray, h: float = 0.0) -> int:
        a, d = self._map(a, d)
        return self._append(SocConstraint(a=a, d=d, g=self._vector(g, "g"), h=self._finite(h)))

    def add_rsoc(self, a: np.ndarray, d: np.ndarray, p: np.ndarray, q: np.ndarray, p0: float = 0.0,
                 q0: float = 0.0) -> int:
        a, d = self._map(a, d)
        return self._append(RsocConstraint(a=a, d=d, p=self._vector(p, "p"), q=self._vector(q, "q"),
                                           p0=self._finite(p0), q0=self._finite(q0)))

    def slack(self, constraint_id: int, x: np.ndarray) -> float:
        """Signed slack of one constraint at ``x``: absolute for linear rows, relative for cones."""
        return self.constraints[constraint_id].slack(x)

    def max_violation(self, x: np.ndarray) -> Dict[str, float]:
        linear = [c.slack(x) for c in self.linear_constraints]
        cones = [c.slack(x) for c in self.constraints if not isinstance(c, LinearConstraint)]
        return {
            "linear": max([0.0] + [-s for s in linear]),
            "cone": max([0.0] + [-s for s in cones]),
        }

    def _append(self, constraint: Constraint) -> int:
        self.constraints.append(constraint)
        return len(self.constraints) - 1

    def _vector(self, value, name: str) -> np.ndarray:
        vector = np.asarray(value, dtype=float)
        if vector.shape != (self.n_vars,):
            raise DimensionMismatchError("Coefficient vector does not match n_vars", item=name,
                                         shape=vector.shape, n_vars=self.n_vars)
        if not np.all(np.isfinite(vector)):
            raise DimensionMismatchError("Coefficients must be finite", item=name)
        return vector

    def _map(self, a, d):
        a = np.atleast_2d(np.asarray(a, dtype=float))
        d = np.atleast_1d(np.asarray(d, dtype=float))
        if a.shape[1] != self.n_vars or d.shape != (a.shape[0],):
            raise DimensionMismatchError("Cone map does not match n_vars", a_shape=a.shape, d_shape=d.shape,
                                         n_vars=self.n_vars)
        if not (np.all(np.isfinite(a)) and np.all(np.isfinite(d))):
            raise DimensionMismatchError("Cone coefficients must be finite")
        return a, d

    @staticmethod
    def _finite(value: float) -> float:
        value = float(value)
        if not np.isfinite(value):
            raise DimensionMismatchError("Constant terms must be finite", value=value)
        return value


class ConeSolution(BaseModel):
    """
    Result of :func:`fdrelay.conic.solve`.

    ``x`` and ``obj`` are only meaningful when ``status`` is Optimal.
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    status: ConeStatus = Field(..., description="Solver outcome")
    x: Optional[np.ndarray] = Field(None, description="Optimal real decision vector")
    obj: Optional[float] = Field(None, description="Optimal objective value")
    tolerance: float = Field(..., description="Tolerance the solution was computed with")
    detail: str = Field("", description="Solver status text for diagnostics")

    @property
    def optimal(self) -> bool:
        return self.status == ConeStatus.OPTIMAL
