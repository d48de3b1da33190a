"""
The outer alternating-optimization loop shared by the proposed design and the zero-forcing benchmark.

A scheme is a list of named stages. Each stage maps the current beamformer set to a new one; the loop records the
total power after every stage, fails the run on any increase beyond the monotonicity slack and stops once an outer
iteration improves the total power by less than the configured fraction.
"""
import time
from typing import Callable, List, NamedTuple, Sequence, Tuple

import structlog

from fdrelay.ao.config import AoConfig
from fdrelay.ao.report import FINAL_POINT_INFEASIBLE, MONOTONICITY_BREACH, ReportStatus, SolveReport, StageRecord
from fdrelay.errors import DROPPABLE_ERRORS, FdRelayError
from fdrelay.model.closed_form import check_feasible, total_power
from fdrelay.model.system import BeamformerSet, ChannelSet, LinkBudget
from fdrelay.tracer import null_tracer

logger = structlog.get_logger()


class StageOutcome(NamedTuple):
    beamformers: BeamformerSet
    conic_solves: int = 0
    sca_iterations: int = 0
    flagged: bool = False


Stage = Tuple[str, Callable[[BeamformerSet], StageOutcome]]


def alternate(scheme: str, ch: ChannelSet, budget: LinkBudget, cfg: AoConfig, init: BeamformerSet,
              stages: Sequence[Stage], tracer=null_tracer, correlation_id: str = None) -> SolveReport:
    """
    Run the stages in order until convergence, the iteration cap or a failure.

    Subproblem errors never escape: they end the run with a Failed report that keeps the last accepted point.

    Parameters
    ----------
    scheme : str
        Name recorded on the report and on tracer events.
    init : BeamformerSet
        Feasible start point.
    stages : sequence of (name, callable)
        Stage updates, applied in order within each outer iteration.
    """
    started = time.perf_counter()
    bf = init
    current = total_power(bf, ch, budget.sigma2)
    powers: List[float] = [current]
    records: List[StageRecord] = []
    flagged: List[int] = []
    solves = sca_iterations = 0
    status, reason, dropped = ReportStatus.MAX_ITERS, None, False
    iteration = 0

    while iteration < cfg.max_outer and status == ReportStatus.MAX_ITERS:
        iteration += 1
        for name, update in stages:
            try:
                outcome = update(bf)
                power = total_power(outcome.beamformers, ch, budget.sigma2)
            except FdRelayError as error:
                error.with_context(stage=name, outer_iteration=iteration)
                logger.warning("Stage failed", scheme=scheme, error=str(error))
                status, reason, dropped = ReportStatus.FAILED, type(error).__name__, isinstance(error, DROPPABLE_ERRORS)
                break
            solves += outcome.conic_solves
            sca_iterations += outcome.sca_iterations
            if outcome.flagged and iteration not in flagged:
                flagged.append(iteration)
            records.append(StageRecord(outer_iteration=iteration, stage=name, total_power=power,
                                       flagged=outcome.flagged))
            tracer.record_stage(scheme, outer_iteration=iteration, stage=name, total_power=power,
                                correlation_id=correlation_id)
            if power > current * (1.0 + cfg.monotonicity_slack):
                logger.warning("Total power increased", scheme=scheme, stage=name, outer_iteration=iteration,
                               before=current, after=power)
                status, reason = ReportStatus.FAILED, MONOTONICITY_BREACH
                break
            bf, current = outcome.beamformers, power
        if status == ReportStatus.FAILED:
            break

        previous = powers[-1]
        powers.append(current)
        if previous - current < cfg.tol_outer_rel * previous:
            status = ReportStatus.CONVERGED

    completed = len(powers) - 1
    feasibility = check_feasible(bf, ch, budget.theta, budget.sigma2)
    if status != ReportStatus.FAILED and not feasibility.feasible:
        logger.warning("Final point fails the feasibility check", scheme=scheme, failures=feasibility.failures())
        status, reason = ReportStatus.FAILED, FINAL_POINT_INFEASIBLE
    logger.info("AO finished", scheme=scheme, status=status.value, iterations=completed, total_power=current)
    return SolveReport(scheme=scheme, powers=powers, stages=records, final=bf, feasibility=feasibility,
                       status=status, failure_reason=reason, dropped=dropped, iterations=completed,
                       wall_time_s=time.perf_counter() - started, conic_solves=solves,
                       sca_iterations=sca_iterations, flagged_iterations=flagged)


def point_report(scheme: str, ch: ChannelSet, budget: LinkBudget, bf: BeamformerSet) -> SolveReport:
    """A zero-iteration report for a fixed beamformer set."""
    power = total_power(bf, ch, budget.sigma2)
    return SolveReport(scheme=scheme, powers=[power], final=bf,
                       feasibility=check_feasible(bf, ch, budget.theta, budget.sigma2),
                       status=ReportStatus.CONVERGED)


def failed_report(scheme: str, error: FdRelayError) -> SolveReport:
    """A report for a run that could not start."""
    logger.warning("Scheme could not start", scheme=scheme, error=str(error))
    return SolveReport(scheme=scheme, status=ReportStatus.FAILED, failure_reason=type(error).__name__,
                       dropped=isinstance(error, DROPPABLE_ERRORS))
