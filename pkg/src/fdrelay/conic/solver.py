"""
Solves :class:`ConeProgram` instances with cvxpy's CLARABEL interior-point backend, falling back to SCS when CLARABEL
cannot finish, and verifies every reported optimum against the program's own constraints.
"""
import time

import cvxpy as cp
import numpy as np
import structlog

from fdrelay.conic.program import ConeProgram, ConeSolution, ConeStatus, LinearConstraint, RsocConstraint
from fdrelay.errors import NumericFailureError, SubproblemInfeasibleError
from fdrelay.tracer import null_tracer

logger = structlog.get_logger()

DEFAULT_TOLERANCE = 1e-8
FEASIBILITY_TOLERANCE = 1e-7
RETRY_RELAXATION = 10.0
FALLBACK_SOLVERS = (cp.SCS,)
SCS_MAX_ITERS = 100_000

_SOLVED = (cp.OPTIMAL, cp.OPTIMAL_INACCURATE)
_INFEASIBLE = (cp.INFEASIBLE, cp.INFEASIBLE_INACCURATE)


def _solver_options(solver: str, tol: float) -> dict:
    if solver == cp.SCS:
        return {"eps_abs": tol, "eps_rel": tol, "max_iters": SCS_MAX_ITERS}
    return {"tol_gap_abs": tol, "tol_gap_rel": tol, "tol_feas": tol}


def _to_cvxpy(program: ConeProgram):
    x = cp.Variable(program.n_vars)
    constraints = []
    for constraint in program.constraints:
        if isinstance(constraint, LinearConstraint):
            expression = constraint.row @ x
            constraints.append(expression == constraint.rhs if constraint.sense == "==" else
                               expression <= constraint.rhs)
            continue
        if isinstance(constraint, RsocConstraint):
            constraint = constraint.as_soc()
        constraints.append(cp.SOC(constraint.g @ x + constraint.h, constraint.a @ x + constraint.d))
    return x, cp.Problem(cp.Minimize(program.objective @ x), constraints)


def solve(program: ConeProgram, tol: float = DEFAULT_TOLERANCE, label: str = "conic", tracer=null_tracer,
          retried: bool = False, solver: str = cp.CLARABEL) -> ConeSolution:
    """
    Solve a conic program.

    An Optimal status is only returned after every linear constraint holds to ``1e-7`` absolute and every cone to
    ``1e-7`` relative slack (or ``tol`` when looser); otherwise the status is NumericFailure.

    Parameters
    ----------
    program : ConeProgram
    tol : float
        Duality gap and feasibility tolerance requested from the solver.
    label : str
        Name used in logs and tracer events.
    tracer : TracerSystem, optional
        Receives a ConeSolveTracerEvent.
    retried : bool
        Marks the tracer event of a relaxed-tolerance retry.
    solver : str
        cvxpy solver name, CLARABEL or SCS.

    Returns
    -------
    ConeSolution
    """
    if program.n_vars == 0:
        return ConeSolution(status=ConeStatus.OPTIMAL, x=np.zeros(0), obj=0.0, tolerance=tol)

    x, problem = _to_cvxpy(program)
    cvx_status = None
    started = time.perf_counter()
    try:
        problem.solve(solver=solver, **_solver_options(solver, tol))
        cvx_status = problem.status
        detail = str(cvx_status)
    except cp.error.SolverError as error:
        detail = f"solver error: {error}"
    duration_ms = 1000.0 * (time.perf_counter() - started)

    status, point, objective = _classify(program, cvx_status, x.value, tol)
    solution = ConeSolution(status=status, x=point, obj=objective, tolerance=tol, detail=detail)
    tracer.record_cone_solve(label, n_vars=program.n_vars, n_constraints=len(program.constraints),
                             status=status.value, tolerance=tol, objective=objective, retried=retried,
                             solve_duration_ms=duration_ms)
    logger.debug("Conic solve", label=label, solver=solver, status=status.value, objective=objective, detail=detail)
    return solution


def _classify(program: ConeProgram, cvx_status, value, tol: float):
    if cvx_status in _INFEASIBLE:
        return ConeStatus.INFEASIBLE, None, None
    if cvx_status not in _SOLVED or value is None:
        return ConeStatus.NUMERIC_FAILURE, None, None
    point = np.asarray(value, dtype=float)
    violation = program.max_violation(point)
    limit = max(FEASIBILITY_TOLERANCE, tol)
    if violation["linear"] > limit or violation["cone"] > limit:
        logger.warning("Solver point violates constraints", linear=violation["linear"], cone=violation["cone"],
                       limit=limit)
        return ConeStatus.NUMERIC_FAILURE, None, None
    return ConeStatus.OPTIMAL, point, float(program.objective @ point)


def solve_or_raise(program: ConeProgram, tol: float = DEFAULT_TOLERANCE, label: str = "conic",
                   tracer=null_tracer) -> ConeSolution:
    """
    Solve, retrying with a ten times looser tolerance on numeric failure.

    The retry runs CLARABEL first and then every installed solver of ``FALLBACK_SOLVERS`` until one returns a
    verified optimum or an infeasibility certificate.

    Raises
    ------
    SubproblemInfeasibleError
        When a solver certifies infeasibility.
    NumericFailureError
        When every attempt fails numerically.
    """
    solution = solve(program, tol=tol, label=label, tracer=tracer)
    if solution.status == ConeStatus.NUMERIC_FAILURE:
        relaxed = RETRY_RELAXATION * tol
        logger.info("Retrying conic solve with relaxed tolerance", label=label, tol=relaxed)
        solution = solve(program, tol=relaxed, label=label, tracer=tracer, retried=True)
        installed = cp.installed_solvers()
        for fallback in FALLBACK_SOLVERS:
            if solution.status != ConeStatus.NUMERIC_FAILURE:
                break
            if fallback not in installed:
                continue
            logger.info("Falling back to another conic solver", label=label, solver=fallback, tol=relaxed)
            solution = solve(program, tol=relaxed, label=label, tracer=tracer, retried=True, solver=fallback)
    if solution.status == ConeStatus.INFEASIBLE:
        raise SubproblemInfeasibleError("Conic subproblem is infeasible", subproblem=label,
                                        conic_status=solution.detail)
    if solution.status == ConeStatus.NUMERIC_FAILURE:
        raise NumericFailureError("Conic solver failed after relaxed retry and fallback", subproblem=label,
                                  conic_status=solution.detail)
    return solution
