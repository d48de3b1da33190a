"""
Entry points that solve one channel draw: the proposed alternating optimization and the scheme dispatcher.
"""
from typing import Union

import structlog

from fdrelay.ao.config import AoConfig
from fdrelay.ao.loop import StageOutcome, alternate, failed_report, point_report
from fdrelay.ao.report import SolveReport
from fdrelay.baselines import SchemeKind, init_beamformers, scheme_inputs, zf_ao
from fdrelay.errors import FdRelayError, SubproblemInfeasibleError
from fdrelay.model.closed_form import check_feasible, total_power
from fdrelay.model.system import BeamformerSet, ChannelSet, LinkBudget
from fdrelay.relay import VSubproblemData, WSubproblemData, sca_v, sca_w
from fdrelay.relay.sca import ACCEPT_OBJECTIVE_NOISE, ACCEPT_SLACK
from fdrelay.tracer import null_tracer
from fdrelay.users import FSubproblemData, f_constraint_slack, mmse_receivers, solve_f

logger = structlog.get_logger()


def run_ao(ch: ChannelSet, budget: LinkBudget, cfg: AoConfig = None, init: BeamformerSet = None,
           scheme: str = SchemeKind.PROPOSED_FD.value, tracer=null_tracer, correlation_id: str = None) -> SolveReport:
    """
    Minimize total transmit power by alternating over v, w, (f_1, f_2) and (u_1, u_2).

    The relay blocks run successive convex approximation from the current point, the user transmit block is solved
    globally and the receivers are replaced by their MMSE solutions. Every update keeps the current point feasible, so
    the recorded power never increases beyond solver noise.

    Parameters
    ----------
    ch : ChannelSet
        Channel draw.
    budget : LinkBudget
        Noise power and SINR targets.
    cfg : AoConfig, optional
        Iteration caps and tolerances. Defaults to ``AoConfig()``.
    init : BeamformerSet, optional
        Feasible start point. Defaults to :func:`fdrelay.baselines.init_beamformers`.
    scheme : str
        Name recorded on the report.
    tracer : TracerSystem, optional
        Receives cone-solve, SCA-step and stage events.
    correlation_id : str, optional
        Tag linking every event of this run.

    Returns
    -------
    SolveReport
        Subproblem failures are reported through ``status`` rather than raised.

    Raises
    ------
    RankDeficientError
        If ``init`` is omitted and no initialization point exists.
    DimensionMismatchError
        If ``init`` does not match the antenna counts of ``ch``.
    LoopUnstableError
        If ``init`` has a loop gain of one or more.
    """
    cfg = cfg or AoConfig()
    init = init if init is not None else init_beamformers(ch, budget)
    init.check_shapes(ch.dims)
    sca_options = dict(max_iters=cfg.sca_max, tol_rel=cfg.tol_sca_rel, tol=cfg.solver_tol,
                       audit=cfg.audit_minorants, tracer=tracer, correlation_id=correlation_id)

    def v_stage(bf: BeamformerSet) -> StageOutcome:
        state = sca_v(VSubproblemData.from_beamformers(bf, ch, budget), bf.v, **sca_options)
        if state.audit_failures:
            logger.warning("Minorant audit failed", block="v", failures=state.audit_failures)
        return StageOutcome(bf.replace(v=state.iterate), state.solves, state.iterations)

    def w_stage(bf: BeamformerSet) -> StageOutcome:
        state = sca_w(WSubproblemData.from_beamformers(bf, ch, budget), bf.w, **sca_options)
        if state.audit_failures:
            logger.warning("Minorant audit failed", block="w", failures=state.audit_failures)
        return StageOutcome(bf.replace(w=state.iterate), state.solves, state.iterations)

    def f_stage(bf: BeamformerSet) -> StageOutcome:
        data = FSubproblemData.from_beamformers(bf, ch, budget)
        try:
            solution = solve_f(data, tol=cfg.solver_tol, tracer=tracer)
        except SubproblemInfeasibleError as error:
            logger.warning("User transmit subproblem infeasible, keeping previous f", error=str(error))
            return StageOutcome(bf, conic_solves=1, flagged=True)
        candidate = bf.replace(f_1=solution.f_1, f_2=solution.f_2)
        if (f_constraint_slack(data, candidate.f_1, candidate.f_2) < ACCEPT_SLACK
                or total_power(candidate, ch, budget.sigma2)
                > total_power(bf, ch, budget.sigma2) * (1.0 + ACCEPT_OBJECTIVE_NOISE)):
            logger.info("User transmit solution not better than the current point, keeping previous f")
            return StageOutcome(bf, conic_solves=1)
        return StageOutcome(candidate, conic_solves=1)

    def u_stage(bf: BeamformerSet) -> StageOutcome:
        return StageOutcome(mmse_receivers(bf, ch, budget.sigma2))

    stages = [("v", v_stage), ("w", w_stage), ("f", f_stage), ("u", u_stage)]
    return alternate(scheme, ch, budget, cfg, init, stages, tracer=tracer, correlation_id=correlation_id)


def run_scheme(kind: Union[SchemeKind, str], ch: ChannelSet, budget: LinkBudget, cfg: AoConfig = None,
               tracer=null_tracer, correlation_id: str = None) -> SolveReport:
    """
    Solve one draw with one scheme.

    Every scheme starts from the initialization point built on its own channels and targets. The reference
    schemes transform the inputs first (see :func:`fdrelay.baselines.scheme_inputs`), so their feasibility audits run
    against the ideal channels and, for half duplex, the rate-doubled targets.
    """
    kind = SchemeKind(kind)
    ch, budget = scheme_inputs(kind, ch, budget)
    try:
        init = init_beamformers(ch, budget)
    except FdRelayError as error:
        return failed_report(kind.value, error)

    if not kind.optimizes:
        return point_report(kind.value, ch, budget, init)
    if kind == SchemeKind.ZF_FD:
        return zf_ao(ch, budget, cfg, init=init, tracer=tracer, correlation_id=correlation_id)
    return run_ao(ch, budget, cfg, init=init, scheme=kind.value, tracer=tracer, correlation_id=correlation_id)


def tighten_ideal_bound(ideal: SolveReport, full_duplex: SolveReport, ch: ChannelSet, budget: LinkBudget,
                        cfg: AoConfig = None, tracer=null_tracer, correlation_id: str = None) -> SolveReport:
    """
    Re-run the ideal scheme from the final point of a full-duplex run and keep the cheaper of the two ideal runs.

    Zeroing the self-interference channels lowers the relay power and raises both SINRs of any point, so the
    full-duplex final point is a feasible start on the ideal channels and the result bounds the full-duplex run from
    below.

    Parameters
    ----------
    ideal : SolveReport
        The ideal scheme run from the shared initialization point.
    full_duplex : SolveReport
        A full-duplex run on the true channels ``ch`` at ``budget``.
    """
    if not full_duplex.succeeded or full_duplex.final is None:
        return ideal
    ideal_ch, ideal_budget = scheme_inputs(SchemeKind.IDEAL_FD, ch, budget)
    start = check_feasible(full_duplex.final, ideal_ch, ideal_budget.theta, ideal_budget.sigma2)
    if not start.feasible:
        logger.warning("Full-duplex point is not feasible on the ideal channels", failures=start.failures())
        return ideal
    warm = run_ao(ideal_ch, ideal_budget, cfg, init=full_duplex.final, scheme=SchemeKind.IDEAL_FD.value, tracer=tracer,
                  correlation_id=correlation_id)
    if warm.succeeded and (not ideal.succeeded or warm.final_power < ideal.final_power):
        logger.info("Ideal bound tightened from the full-duplex point", before=ideal.final_power,
                    after=warm.final_power)
        return warm
    return ideal
