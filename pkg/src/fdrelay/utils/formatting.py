"""Console rendering of benchmark summaries.

Rows are coloured by health: green when every draw succeeded, yellow when some draws were dropped and red when the
scheme hard-failed on too many draws.
"""
import math
import sys
from typing import Dict

import pandas as pd
from colorama import Fore, Style, init

init()

HARD_FAILURE_LIMIT = 0.2


def format_block(content: str, separator: str = "#" * 39) -> str:
    """Frame a block of text with separator lines.

    Parameters
    ----------
    content : str
        The content to be framed
    separator : str, optional
        The separator line to use, defaults to 39 '#' characters
    """
    return f"\n{separator}\n{content}\n{separator}\n"


def _colour(drop_rate: float, failure_rate: float) -> str:
    if failure_rate > HARD_FAILURE_LIMIT:
        return Fore.RED
    if drop_rate > 0.0:
        return Fore.YELLOW
    return Fore.GREEN


def format_summary(summary: pd.DataFrame, failure_rates: Dict[str, float]) -> str:
    """Render a summary table, one coloured line per (target, scheme)."""
    lines = [f"{'theta_db':>9} {'scheme':<20} {'power_dbm':>10} {'drop':>6} {'iters':>6}"]
    for row in summary.itertuples(index=False):
        power = "-" if math.isnan(row.mean_power_dbm) else f"{row.mean_power_dbm:.2f}"
        iters = "-" if math.isnan(row.mean_iters) else f"{row.mean_iters:.1f}"
        colour = _colour(row.drop_rate, failure_rates.get(row.scheme, 0.0))
        lines.append(f"{colour}{row.theta_db:>9g} {row.scheme:<20} {power:>10} {row.drop_rate:>6.2f} "
                     f"{iters:>6}{Style.RESET_ALL}")
    return format_block("\n".join(lines))


def print_summary(summary: pd.DataFrame, failure_rates: Dict[str, float]) -> None:
    print(format_summary(summary, failure_rates))


def print_error(text: str) -> None:
    """Print text in red to standard error."""
    print(f"{Fore.RED}{text}{Style.RESET_ALL}", file=sys.stderr)
