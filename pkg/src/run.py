#!/usr/bin/env python3
"""
MagniPersist - magnitude, magnitude homology and persistence of finite metric spaces

Commands:
- magnitude  exact magnitude as a rational function of q
- magfun     magnitude function sampled at t values
- mh         magnitude homology table
- euler      Euler characteristic check against the magnitude
- ph         Vietoris-Rips barcode
- blurred    blurred magnitude homology (enriched nerve barcode)
- limits     small-scale limits of the filtrations and of ordinary MH
- approx     (k+1)-approximation check between nerve and Rips

Usage:
    magnipersist --command magnitude --input space.txt
"""

from __future__ import annotations

import argparse
import logging
import sys
from fractions import Fraction
from typing import NoReturn

from rich.console import Console
from rich.logging import RichHandler

from magnipersist.config import AppConfig, load_config, to_fraction
from magnipersist.constants import ChainModes, Commands
from magnipersist.errors import ConfigError, MagniPersistError
from magnipersist.orchestrator import RunConfig, RunOrchestrator


def _fraction(text: str) -> Fraction:
    try:
        return to_fraction(text, "argument")
    except MagniPersistError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _integer(text: str) -> int:
    value = _fraction(text)
    if value.denominator != 1:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer")
    return int(value)


def _fraction_list(text: str) -> tuple[Fraction, ...]:
    return tuple(_fraction(item) for item in text.split(",") if item.strip())


class ArgumentParser(argparse.ArgumentParser):
    """Usage errors raise ConfigError instead of exiting."""

    def error(self, message: str) -> NoReturn:
        raise ConfigError(message)


def _format_list(values: tuple[Fraction, ...]) -> str:
    return ",".join(str(v) for v in values)


def parse_arguments(config: AppConfig, argv: list[str] | None = None) -> argparse.Namespace:
    """
    Parse command-line arguments.

    Args:
        config: Loaded configuration for defaults
        argv: Argument list (defaults to sys.argv[1:])

    Returns:
        Parsed arguments

    Raises:
        ConfigError: malformed or missing arguments
    """
    parser = ArgumentParser(
        description="Magnitude, magnitude homology and persistence of finite metric spaces"
    )

    parser.add_argument(
        "--config",
        type=str,
        default=None,
        help="Path to configuration file (default: <project-root>/config.yaml)",
    )
    parser.add_argument("--command", required=True, choices=Commands.ALL)
    parser.add_argument(
        "--input", required=True, help="Distance matrix (or point cloud with --metric); - for stdin"
    )
    parser.add_argument("--output", default=None, help="Output file (default: stdout)")

    bounds = config.bounds
    parser.add_argument(
        "--n-max",
        type=_integer,
        default=bounds.n_max,
        help=f"Degree bound (default: {bounds.n_max})",
    )
    parser.add_argument(
        "--dim-max",
        type=_integer,
        default=bounds.dim_max,
        help=f"Cell dimension bound (default: {bounds.dim_max})",
    )
    parser.add_argument(
        "--l-max",
        type=_fraction,
        default=bounds.l_max,
        help=f"Grade bound, p/q accepted (default: {bounds.l_max})",
    )
    parser.add_argument(
        "--eps-max",
        type=_fraction,
        default=bounds.eps_max,
        help=f"Filtration bound, p/q accepted (default: {bounds.eps_max})",
    )
    parser.add_argument(
        "--prime",
        type=_integer,
        default=config.coefficients.prime,
        help=f"Field characteristic (default: {config.coefficients.prime})",
    )
    parser.add_argument(
        "--mode",
        choices=ChainModes.ALL,
        default=config.homology.mode,
        help=f"Magnitude chain complex (default: {config.homology.mode})",
    )
    parser.add_argument(
        "--precision",
        type=_integer,
        default=config.magnitude.precision,
        help=f"Correct decimal digits for magfun (default: {config.magnitude.precision})",
    )
    parser.add_argument(
        "--t",
        type=_fraction_list,
        default=config.magnitude.t,
        help=f"Comma-separated t samples for magfun (default: {_format_list(config.magnitude.t)})",
    )
    parser.add_argument(
        "--metric",
        default=config.input.metric,
        help="Read a point cloud: l1, linf or euclid:D (default: distance matrix)",
    )
    parser.add_argument("--k", type=_integer, default=0, help="Homology degree for limits/approx")
    parser.add_argument(
        "--sample-eps",
        type=_fraction_list,
        default=(),
        help="Comma-separated eps samples for approx (default: distances of the space)",
    )
    parser.add_argument(
        "--check-coend",
        action="store_true",
        help="blurred: compare against the level-wise chain complex at every critical value",
    )
    parser.add_argument(
        "--export-complex",
        default=None,
        metavar="PATH",
        help="ph/blurred: also write the filtered complex, one cell per line",
    )
    parser.add_argument(
        "--export-space",
        default=None,
        metavar="PATH",
        help="Also write the validated distance matrix (e.g. after --metric)",
    )
    parser.add_argument(
        "--max-generators",
        type=_integer,
        default=config.caps.max_generators,
        help=f"Generator cap (default: {config.caps.max_generators})",
    )
    parser.add_argument(
        "--max-cells",
        type=_integer,
        default=config.caps.max_cells,
        help=f"Cell cap (default: {config.caps.max_cells})",
    )
    parser.add_argument("--verbose", action="store_true", help="Debug logging and run summary")

    return parser.parse_args(argv)


def setup_logging(config: AppConfig, verbose: bool) -> None:
    """Rich handler on stderr, plus a plain file handler when configured."""
    level = logging.DEBUG if verbose else getattr(logging, config.system.log_level.upper(), None)
    if not isinstance(level, int):
        level = logging.WARNING
    handlers: list[logging.Handler] = [
        RichHandler(console=Console(stderr=True), show_path=False, rich_tracebacks=True)
    ]
    if config.system.log_file:
        file_handler = logging.FileHandler(config.system.log_file)
        file_handler.setFormatter(
            logging.Formatter("%(asctime)s %(levelname)s %(name)s: %(message)s")
        )
        handlers.append(file_handler)
    logging.basicConfig(level=level, format="%(message)s", handlers=handlers, force=True)


def print_banner(run_config: RunConfig, console: Console) -> None:
    """
    Print startup banner with configuration (stderr only).

    Args:
        run_config: Run configuration
        console: stderr console
    """
    console.rule("[bold]MAGNIPERSIST[/bold]")
    console.print(f"Command: {run_config.command}")
    source = run_config.input_path
    if run_config.metric:
        source += f" ({run_config.metric})"
    console.print(f"Input: {source}")
    console.print(
        f"Bounds: n_max={run_config.n_max} l_max={run_config.l_max} "
        f"dim_max={run_config.dim_max} eps_max={run_config.eps_max}"
    )
    console.print(
        f"Field: F_{run_config.prime}  Mode: {run_config.mode}  Threads: {run_config.threads}"
    )
    console.rule()


def _config_path(argv: list[str]) -> str | None:
    for i, arg in enumerate(argv):
        if arg == "--config" and i + 1 < len(argv):
            return argv[i + 1]
        if arg.startswith("--config="):
            return arg.split("=", 1)[1]
    return None


def main(argv: list[str] | None = None) -> int:
    """Main entry point."""
    argv = sys.argv[1:] if argv is None else argv
    console = Console(stderr=True)

    # Configuration first, so YAML values become argparse defaults
    try:
        config = load_config(_config_path(argv))
    except MagniPersistError as exc:
        console.print(exc.one_line(), markup=False, highlight=False, soft_wrap=True)
        return exc.exit_code

    try:
        args = parse_arguments(config, argv)
    except MagniPersistError as exc:
        console.print(exc.one_line(), markup=False, highlight=False, soft_wrap=True)
        return exc.exit_code
    setup_logging(config, args.verbose)

    run_config = RunConfig(
        command=args.command,
        input_path=args.input,
        n_max=args.n_max,
        l_max=args.l_max,
        dim_max=args.dim_max,
        eps_max=args.eps_max,
        prime=args.prime,
        mode=args.mode,
        precision=args.precision,
        metric=args.metric,
        max_generators=args.max_generators,
        max_cells=args.max_cells,
        output_path=args.output,
        t_values=tuple(args.t),
        k=args.k,
        sample_eps=tuple(args.sample_eps),
        check_coend=args.check_coend,
        export_complex=args.export_complex,
        export_space=args.export_space,
        threads=config.system.threads,
        verbose=args.verbose,
    )

    if args.verbose:
        print_banner(run_config, console)

    orchestrator = RunOrchestrator(run_config, console)
    exit_code = orchestrator.run()
    if args.verbose:
        console.print("✓ Done" if exit_code == 0 else f"✗ Exit code {exit_code}")
    return exit_code


if __name__ == "__main__":
    sys.exit(main())
