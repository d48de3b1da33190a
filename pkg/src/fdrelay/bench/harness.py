"""
Seeded Monte-Carlo runs of every scheme on shared channel draws.

Draw ``r`` of an experiment comes from ``SeedSequence([seed, r])``, so every scheme and every SINR target sees the
same channels for a given run index and the tables do not depend on the number of worker processes.
"""
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from typing import Callable, Dict, Iterable, List, Tuple

import numpy as np
import pandas as pd
import structlog

from fdrelay.ao import SolveReport, run_scheme, tighten_ideal_bound
from fdrelay.baselines import SchemeKind, scheme_inputs
from fdrelay.bench.experiment import ExperimentSpec
from fdrelay.errors import ConfigError, FdRelayError
from fdrelay.model.closed_form import relay_power, sinr
from fdrelay.model.oracle import simulate_relay_power, simulate_sinr
from fdrelay.model.system import USERS, ChannelSet, generate_channels
from fdrelay.model.units import watts_to_dbm

logger = structlog.get_logger()

ROW_COLUMNS = ["theta_db", "scheme", "run_index", "total_power_dbm", "outer_iters", "status", "drop_flag"]
TRACE_COLUMNS = ["scheme", "outer_iter", "mean_power_dbm"]
ORACLE_MISMATCH = "OracleMismatch"
IDEAL_BOUND_VIOLATION = "IdealBoundViolation"
IDEAL_BOUND_TOLERANCE = 1e-6
RELAY_POWER_TOLERANCE = 0.01
SINR_TOLERANCE = 0.02


def draw_channels(spec: ExperimentSpec, run_index: int) -> ChannelSet:
    """The channel draw of run ``run_index``."""
    rng = np.random.default_rng(np.random.SeedSequence([spec.seed, run_index]))
    return generate_channels(rng, spec.dims, spec.budget(spec.theta_db_list[0]))


def oracle_agrees(report: SolveReport, ch: ChannelSet, spec: ExperimentSpec, theta_db: float, run_index: int) -> bool:
    """Compare the closed-form relay power and SINRs of the final point with the time-domain simulators."""
    kind = SchemeKind(report.scheme)
    ch, budget = scheme_inputs(kind, ch, spec.budget(theta_db))
    bf = report.final
    rng = np.random.default_rng(np.random.SeedSequence([spec.seed, run_index, 1]))
    try:
        expected = relay_power(bf, ch, budget.sigma2)
        simulated = simulate_relay_power(bf, ch, budget.sigma2, n_steps=spec.oracle_steps, rng=rng)
        agree = abs(simulated - expected) <= RELAY_POWER_TOLERANCE * expected
        for i in USERS:
            expected_sinr = sinr(i, bf, ch, budget.sigma2)
            simulated_sinr = simulate_sinr(i, bf, ch, budget.sigma2, n_steps=spec.oracle_steps, rng=rng)
            agree = agree and abs(simulated_sinr - expected_sinr) <= SINR_TOLERANCE * expected_sinr
    except FdRelayError as error:
        logger.warning("Oracle audit could not run", scheme=report.scheme, run_index=run_index, error=str(error))
        return False
    if not agree:
        logger.warning("Oracle disagrees with closed forms", scheme=report.scheme, theta_db=theta_db,
                       run_index=run_index)
    return agree


def _row(report: SolveReport, theta_db: float, run_index: int, status: str) -> dict:
    power = report.final_power
    return {
        "theta_db": float(theta_db),
        "scheme": report.scheme,
        "run_index": run_index,
        "total_power_dbm": watts_to_dbm(power) if report.succeeded and power and power > 0.0 else float("nan"),
        "outer_iters": report.iterations,
        "status": status,
        "drop_flag": report.dropped,
    }


def ideal_bound_holds(ideal: SolveReport, full_duplex: SolveReport) -> bool:
    """Whether the ideal run costs no more than the full-duplex run on the same draw, when both succeeded."""
    if not (ideal.succeeded and full_duplex.succeeded):
        return True
    return ideal.final_power <= full_duplex.final_power * (1.0 + IDEAL_BOUND_TOLERANCE)


def solve_draw(spec: ExperimentSpec, run_index: int) -> List[dict]:
    """
    Every scheme at every target on draw ``run_index``.

    When both the proposed and the ideal scheme run, the ideal scheme is also started from the proposed final point
    and keeps the cheaper result. A draw where it still costs more than the proposed design is marked
    ``IdealBoundViolation``.
    """
    ch = draw_channels(spec, run_index)
    cfg = spec.ao_config()
    rows = []
    for theta_db in spec.theta_db_list:
        budget = spec.budget(theta_db)
        reports = {}
        for kind in spec.schemes:
            reports[kind] = run_scheme(kind, ch, budget, cfg, correlation_id=f"{theta_db:g}/{run_index}/{kind.value}")
        proposed = reports.get(SchemeKind.PROPOSED_FD)
        if proposed is not None and SchemeKind.IDEAL_FD in reports:
            reports[SchemeKind.IDEAL_FD] = tighten_ideal_bound(
                reports[SchemeKind.IDEAL_FD], proposed, ch, budget, cfg,
                correlation_id=f"{theta_db:g}/{run_index}/{SchemeKind.IDEAL_FD.value}/warm")
        for kind, report in reports.items():
            status = report.status_label
            if spec.oracle_audit and report.succeeded and not oracle_agrees(report, ch, spec, theta_db, run_index):
                status = ORACLE_MISMATCH
            elif kind == SchemeKind.IDEAL_FD and proposed is not None and not ideal_bound_holds(report, proposed):
                logger.warning("Ideal scheme costs more than the proposed design", theta_db=theta_db,
                               run_index=run_index, ideal=report.final_power, proposed=proposed.final_power)
                status = IDEAL_BOUND_VIOLATION
            rows.append(_row(report, theta_db, run_index, status))
    logger.info("Draw solved", run_index=run_index, rows=len(rows))
    return rows


def trace_draw(spec: ExperimentSpec, run_index: int) -> Dict[str, Tuple[List[float], bool]]:
    """
    Outer power trajectories of every scheme on draw ``run_index`` at the single target.

    Each scheme maps to ``(powers, hard_failure)``; failed runs have no powers.
    """
    ch = draw_channels(spec, run_index)
    budget = spec.budget(spec.theta_db_list[0])
    cfg = spec.ao_config()
    trajectories = {}
    for kind in spec.schemes:
        report = run_scheme(kind, ch, budget, cfg, correlation_id=f"trace/{run_index}/{kind.value}")
        powers = list(report.powers) if report.succeeded else []
        trajectories[kind.value] = (powers, not report.succeeded and not report.dropped)
    return trajectories


def _map_runs(spec: ExperimentSpec, work: Callable[[ExperimentSpec, int], object]) -> Iterable:
    runs = range(spec.n_runs)
    if spec.workers == 1:
        return [work(spec, run_index) for run_index in runs]
    with ProcessPoolExecutor(max_workers=spec.workers) as pool:
        return list(pool.map(partial(work, spec), runs))


def run_sweep(spec: ExperimentSpec) -> pd.DataFrame:
    """
    Run every scheme on every draw at every target.

    Returns
    -------
    pandas.DataFrame
        One row per (target, scheme, draw) with the columns of ``ROW_COLUMNS``, sorted by target, scheme and draw.
        Failed runs keep their row with ``total_power_dbm`` missing.
    """
    rows = [row for draw in _map_runs(spec, solve_draw) for row in draw]
    frame = pd.DataFrame(rows, columns=ROW_COLUMNS)
    return frame.sort_values(["theta_db", "scheme", "run_index"], kind="stable").reset_index(drop=True)


def run_convergence_trace(spec: ExperimentSpec) -> pd.DataFrame:
    """
    Mean total power per outer iteration for every scheme at a single target.

    Each run's trajectory is padded with its final value up to the longest run of its scheme; the mean is taken in
    watts over the runs that did not fail and converted to dBm. Iteration 0 is the shared initialization point.
    The share of hard-failed (not dropped) runs per scheme is kept in ``frame.attrs["hard_failure_rates"]``.

    Raises
    ------
    ConfigError
        If the spec lists more than one target.
    """
    if len(spec.theta_db_list) != 1:
        raise ConfigError("A convergence trace needs exactly one SINR target", targets=len(spec.theta_db_list))
    draws = _map_runs(spec, trace_draw)
    rows = []
    failure_rates = {}
    for kind in spec.schemes:
        trajectories = [draw[kind.value][0] for draw in draws if draw[kind.value][0]]
        failure_rates[kind.value] = sum(draw[kind.value][1] for draw in draws) / spec.n_runs
        if not trajectories:
            logger.warning("Every run failed", scheme=kind.value)
            continue
        longest = max(len(t) for t in trajectories)
        padded = np.array([t + [t[-1]] * (longest - len(t)) for t in trajectories])
        for iteration, mean in enumerate(padded.mean(axis=0)):
            rows.append({"scheme": kind.value, "outer_iter": iteration, "mean_power_dbm": watts_to_dbm(mean)})
    frame = pd.DataFrame(rows, columns=TRACE_COLUMNS)
    frame.attrs["hard_failure_rates"] = failure_rates
    return frame


def write_rows(frame: pd.DataFrame, path) -> None:
    """Write a sweep or trace table as UTF-8 CSV with LF line endings and 9 significant digits."""
    frame.to_csv(path, index=False, float_format="%.9g", lineterminator="\n", encoding="utf-8")


def read_rows(path) -> pd.DataFrame:
    """
    Read a sweep table written by :func:`write_rows`.

    Raises
    ------
    ConfigError
        If the header differs from ``ROW_COLUMNS``.
    """
    frame = pd.read_csv(path, encoding="utf-8", dtype={"scheme": str, "status": str})
    if list(frame.columns) != ROW_COLUMNS:
        raise ConfigError("Unexpected sweep table header", path=str(path), columns=list(frame.columns))
    frame["drop_flag"] = frame["drop_flag"].astype(bool)
    return frame
