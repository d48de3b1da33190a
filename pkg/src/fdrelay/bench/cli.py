"""
Command line: ``fdrelay sweep`` and ``fdrelay trace``.

Exit codes are 0 on success, 2 for an invalid spec or arguments and 3 when some scheme hard-failed on more than 20%
of the draws.
"""
import argparse
import logging
from typing import Dict, List, Optional

import structlog
from pydantic import ValidationError

from fdrelay.bench.experiment import ExperimentSpec
from fdrelay.bench.harness import run_convergence_trace, run_sweep, write_rows
from fdrelay.bench.summary import hard_failure_rates, summarize
from fdrelay.errors import ConfigError
from fdrelay.utils.formatting import HARD_FAILURE_LIMIT, print_error, print_summary

logger = structlog.get_logger()

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_HARD_FAILURES = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fdrelay",
                                     description="Monte-Carlo benchmark of full-duplex two-way relay beamforming.")
    commands = parser.add_subparsers(dest="command", required=True)
    for name, text in (("sweep", "Total power versus SINR target for every scheme."),
                       ("trace", "Mean total power versus outer iteration at one SINR target.")):
        command = commands.add_parser(name, help=text, description=text)
        command.add_argument("--spec", help="Flat JSON experiment spec; built-in defaults when omitted.")
        command.add_argument("--out", required=True, help="CSV file to write.")
        command.add_argument("--seed", type=int, help="Override the spec's root seed.")
        command.add_argument("--runs", type=int, help="Override the number of draws per target.")
        command.add_argument("--schemes", help="Comma-separated scheme names, e.g. ProposedFD,ZfFD.")
        command.add_argument("--audit", action="store_true", help="Check final points against the simulators.")
        command.add_argument("--quiet", action="store_true", help="Only log warnings and skip the summary.")
    return parser


def load_spec(args: argparse.Namespace) -> ExperimentSpec:
    """
    The experiment spec named on the command line with the flag overrides applied.

    Raises
    ------
    ConfigError
        If the file or an override is invalid.
    """
    spec = ExperimentSpec.from_json(args.spec) if args.spec else ExperimentSpec()
    try:
        return spec.with_overrides(seed=args.seed, n_runs=args.runs, schemes=args.schemes,
                                   oracle_audit=True if args.audit else None)
    except ValidationError as error:
        raise ConfigError("Invalid command line override", reason=str(error)) from error


def _exit_code(failure_rates: Dict[str, float]) -> int:
    failing = {scheme: rate for scheme, rate in failure_rates.items() if rate > HARD_FAILURE_LIMIT}
    if failing:
        logger.warning("Schemes failed on too many draws", schemes=failing)
        return EXIT_HARD_FAILURES
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.quiet:
        logging.getLogger().setLevel(logging.WARNING)

    try:
        spec = load_spec(args)
        if args.command == "sweep":
            rows = run_sweep(spec)
            write_rows(rows, args.out)
            failure_rates = hard_failure_rates(rows)
            if not args.quiet:
                print_summary(summarize(rows), failure_rates)
        else:
            trace = run_convergence_trace(spec)
            write_rows(trace, args.out)
            failure_rates = trace.attrs["hard_failure_rates"]
    except ConfigError as error:
        print_error(f"Configuration error: {error}")
        return EXIT_CONFIG

    logger.info("Benchmark written", command=args.command, out=args.out)
    return _exit_code(failure_rates)
