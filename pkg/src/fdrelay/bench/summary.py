"""
Aggregation of sweep rows into one line per (target, scheme).
"""
from typing import Dict, Iterable

import numpy as np
import pandas as pd

from fdrelay.errors import EmptyInputError
from fdrelay.model.units import dbm_to_watts, watts_to_dbm

SUMMARY_COLUMNS = ["theta_db", "scheme", "mean_power_dbm", "drop_rate", "mean_iters"]
SUCCESS_STATUSES = ("Converged", "MaxIters")


def mean_power_dbm(powers_dbm: Iterable[float]) -> float:
    """Average powers given in dBm in watts and convert the mean back; NaN when nothing is finite."""
    watts = [dbm_to_watts(p) for p in powers_dbm if np.isfinite(p)]
    return watts_to_dbm(float(np.mean(watts))) if watts else float("nan")


def summarize(rows: pd.DataFrame) -> pd.DataFrame:
    """
    Average the successful runs of every (target, scheme) cell.

    Powers are averaged in watts, not in dB. ``drop_rate`` is the share of the cell's draws flagged as dropped.

    Raises
    ------
    EmptyInputError
        If there are no rows.
    """
    if rows.empty:
        raise EmptyInputError("Nothing to summarize")
    lines = []
    for (theta_db, scheme), cell in rows.groupby(["theta_db", "scheme"], sort=True):
        succeeded = cell[cell["status"].isin(SUCCESS_STATUSES)]
        lines.append({
            "theta_db": theta_db,
            "scheme": scheme,
            "mean_power_dbm": mean_power_dbm(succeeded["total_power_dbm"]),
            "drop_rate": float(cell["drop_flag"].astype(bool).mean()),
            "mean_iters": float(succeeded["outer_iters"].mean()) if len(succeeded) else float("nan"),
        })
    return pd.DataFrame(lines, columns=SUMMARY_COLUMNS)


def hard_failure_rates(rows: pd.DataFrame) -> Dict[str, float]:
    """Per scheme, the share of rows that neither succeeded nor were dropped."""
    hard = ~rows["status"].isin(SUCCESS_STATUSES) & ~rows["drop_flag"].astype(bool)
    return {scheme: float(rate) for scheme, rate in hard.groupby(rows["scheme"]).mean().items()}
