"""
PSICM - Command-line entry point.

Parses the command line, resolves a RunConfig (flags > --config file >
settings) and dispatches to one of the sub-commands. CSV goes to standard
output or --out; the human summary and log records go to standard error.

Exit codes:
    0  success or the expected certification outcome
    1  certification, bound, identity or limit mismatch
    2  configuration error
    3  numerical failure (quadrature did not converge)
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

from src.PSICM.cli.commands import COMMANDS, EXIT_CONFIG, EXIT_NUMERICAL, summary
from src.PSICM.config.run_config import Command, RunConfig, build_run_config
from src.PSICM.config.settings import settings
from src.PSICM.core.errors import ConfigurationError, DomainError, NonConvergenceError

# Configure logger
logger = logging.getLogger(__name__)

# argparse destination -> dotted RunConfig key
FLAG_KEYS: Dict[str, str] = {
    "grid_min": "grid.min",
    "grid_max": "grid.max",
    "points": "grid.points",
    "log": "grid.log",
    "alpha": "alpha",
    "order": "order",
    "steps": "steps",
    "tol": "tol",
    "out": "out",
    "method": "method",
    "abs_tol": "quadrature.abs_tol",
    "rel_tol": "quadrature.rel_tol",
    "small_t": "quadrature.small_t_cutoff",
    "max_subdivisions": "quadrature.max_subdivisions",
}


class PSICMCLI:
    """
    Batch command-line interface.

    Attributes:
        parser: Argument parser with one sub-command per entry of COMMANDS.
        commands: Sub-command handlers keyed by name.

    Example:
        >>> PSICMCLI().run(["eval", "--grid-min", "1", "--grid-max", "1", "--points", "1"])
        0
    """

    def __init__(self):
        self.commands: Dict[str, Callable[[RunConfig], int]] = dict(COMMANDS)
        self.parser: argparse.ArgumentParser = self._build_parser()

    def _build_parser(self) -> argparse.ArgumentParser:
        parser = argparse.ArgumentParser(
            prog="psicm",
            description="Digamma, theta_alpha and complete-monotonicity checks with CSV output.",
        )
        parser.add_argument("command", choices=[c.value for c in Command], help="Sub-command to run")
        parser.add_argument("--config", type=Path, help="Flat key=value configuration file")
        parser.add_argument("--grid-min", type=float, help="Smallest abscissa")
        parser.add_argument("--grid-max", type=float, help="Largest abscissa")
        parser.add_argument("--points", type=int, help="Number of abscissae")
        parser.add_argument(
            "--log", action=argparse.BooleanOptionalAction, default=None,
            help="Log spacing (--no-log for linear spacing)",
        )
        parser.add_argument("--alpha", type=float, action="append", help="Exponent alpha; repeatable")
        parser.add_argument("--order", type=int, help="Highest order of a certification sweep")
        parser.add_argument("--steps", type=float, nargs="+", help="Finite-difference steps")
        parser.add_argument("--tol", type=float, help="Residual or margin tolerance")
        parser.add_argument("--out", type=Path, help="CSV output file (default: standard output)")
        parser.add_argument("--method", choices=["difference", "analytic"], help="Certification method")
        parser.add_argument("--abs-tol", type=float, help="Quadrature absolute tolerance")
        parser.add_argument("--rel-tol", type=float, help="Quadrature relative tolerance")
        parser.add_argument("--small-t", type=float, help="Small-t series cutoff of the kernels")
        parser.add_argument("--max-subdivisions", type=int, help="Quadrature subdivision budget")
        return parser

    def parse(self, argv: Optional[List[str]] = None) -> RunConfig:
        """
        Parse arguments into a RunConfig.

        Raises:
            ConfigurationError: If a value is invalid.
        """
        args: argparse.Namespace = self.parser.parse_args(argv)
        flags: Dict[str, Any] = {key: getattr(args, dest) for dest, key in FLAG_KEYS.items()}
        return build_run_config(args.command, flags, args.config)

    def run(self, argv: Optional[List[str]] = None) -> int:
        """
        Execute one command line and return its exit code.

        Args:
            argv: Arguments without the program name; sys.argv[1:] when omitted.
        """
        try:
            cfg: RunConfig = self.parse(argv)
        except ConfigurationError as e:
            summary(f"error: {e.message}")
            return EXIT_CONFIG

        logger.info(f"Running '{cfg.command.value}'")
        try:
            return self.commands[cfg.command.value](cfg)
        except NonConvergenceError as e:
            logger.error(f"Numerical failure in '{cfg.command.value}': {e}", exc_info=True)
            summary(f"error: quadrature of {e.kernel} did not converge at x={e.x:.17g}")
            return EXIT_NUMERICAL
        except DomainError as e:
            logger.error(f"Invalid input to '{cfg.command.value}': {e}", exc_info=True)
            summary(f"error: {e.message}")
            return EXIT_CONFIG


def main(argv: Optional[List[str]] = None) -> None:
    """
    Main entry point for the psicm command.

    Example:
        $ python -m src.PSICM.main certify --alpha 1 --alpha 1.5
    """
    logging.basicConfig(
        level=getattr(logging, settings.LOG_LEVEL),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
    )
    cli: PSICMCLI = PSICMCLI()
    sys.exit(cli.run(argv))


if __name__ == "__main__":
    main()
