"""
Run Orchestrator

Coordinates one CLI run: load the input space, dispatch the command, and
write the artifact only once the whole computation has succeeded.
"""

from __future__ import annotations

import logging
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable

from rich.console import Console
from rich.table import Table

from magnipersist.algebra.finite_field import require_prime
from magnipersist.constants import ChainModes, Commands, ExitCodes, MetricFlags, Provenance
from magnipersist.errors import ConfigError, InternalCheckFailed, MagniPersistError, ParseError
from magnipersist.formats import emitters
from magnipersist.formats.readers import (
    parse_distance_matrix,
    parse_metric_kind,
    parse_point_cloud,
    snap_point_cloud,
)
from magnipersist.homology import euler_check, magnitude_homology
from magnipersist.limits import c_approximation_check, limit_homology, ordinary_mh_limit
from magnipersist.magnitude import magnitude_function_table, magnitude_rational
from magnipersist.metric import INF, FiniteMetricSpace, min_positive_distance
from magnipersist.persistence.blurred import blurred_mh, compare_with_coend
from magnipersist.persistence.complex import (
    build_enriched_nerve,
    build_vietoris_rips,
    format_complex,
)
from magnipersist.persistence.reduction import reduce_persistence

logger = logging.getLogger(__name__)

# Commands whose output depends on a field characteristic
PRIME_COMMANDS = frozenset({Commands.PH, Commands.BLURRED, Commands.LIMITS, Commands.APPROX})

# Commands that build a single filtered complex
EXPORT_COMMANDS = (Commands.PH, Commands.BLURRED)


@dataclass
class RunConfig:
    """Configuration for a single CLI run."""

    command: str
    input_path: str
    n_max: int = 3
    l_max: Fraction = Fraction(2)
    dim_max: int = 2
    eps_max: Fraction = Fraction(2)
    prime: int = 2
    mode: str = ChainModes.NORMALIZED
    precision: int = 15
    metric: str | None = None
    max_generators: int = 200_000
    max_cells: int = 200_000
    output_path: str | None = None
    t_values: tuple[Fraction, ...] = (Fraction(1, 10), Fraction(1), Fraction(10))
    k: int = 0
    sample_eps: tuple[Fraction, ...] = ()
    check_coend: bool = False
    export_complex: str | None = None
    export_space: str | None = None
    threads: int = 1
    verbose: bool = False

    def validate(self) -> None:
        """
        Raises:
            ConfigError: some field is out of range
            NonPrimeCharacteristic: prime-dependent command with a composite p
        """
        if self.command not in Commands.ALL:
            raise ConfigError(f"unknown command {self.command!r}; expected one of {Commands.ALL}")
        if self.mode not in ChainModes.ALL:
            raise ConfigError(f"unknown mode {self.mode!r}; expected one of {ChainModes.ALL}")
        for name in ("max_generators", "max_cells", "threads", "precision"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be positive, got {getattr(self, name)}")
        for name in ("n_max", "dim_max", "k", "l_max", "eps_max"):
            if getattr(self, name) < 0:
                raise ConfigError(f"{name} must be non-negative, got {getattr(self, name)}")
        if self.command in PRIME_COMMANDS:
            require_prime(self.prime)
        if self.export_complex and self.command not in EXPORT_COMMANDS:
            raise ConfigError(f"--export-complex applies to {EXPORT_COMMANDS}, not {self.command}")


@dataclass
class RunResult:
    exit_code: int
    output: str = ""
    summary: list[tuple[str, str]] = field(default_factory=list)
    # extra artifacts by path, written with the main output
    exports: dict[str, str] = field(default_factory=dict)


class RunOrchestrator:
    """
    Runs one command end to end.

    Responsibilities:
    - Read and validate the input space
    - Dispatch to the library operation for the command
    - Buffer the artifact and write it only on completion
    """

    def __init__(self, config: RunConfig, console: Console | None = None):
        self.config = config
        self.console = console or Console(stderr=True)
        self.space: FiniteMetricSpace | None = None
        self._handlers: dict[str, Callable[[FiniteMetricSpace], RunResult]] = {
            Commands.MAGNITUDE: self._run_magnitude,
            Commands.MAGFUN: self._run_magfun,
            Commands.MH: self._run_mh,
            Commands.EULER: self._run_euler,
            Commands.PH: self._run_ph,
            Commands.BLURRED: self._run_blurred,
            Commands.LIMITS: self._run_limits,
            Commands.APPROX: self._run_approx,
        }

    def setup(self) -> FiniteMetricSpace:
        """Validate the config and load the input space."""
        self.config.validate()
        text = self._read_input()
        if self.config.metric:
            kind, denominator = parse_metric_kind(self.config.metric)
            self.space = snap_point_cloud(parse_point_cloud(text), kind, denominator)
            for warning in self.space.warnings:
                self.console.print(f"[bold yellow]⚠ {warning}[/bold yellow]")
        else:
            self.space = parse_distance_matrix(text, require={MetricFlags.ZERO_DIAGONAL})
        logger.info("loaded %d-point space", self.space.size)
        return self.space

    def _read_input(self) -> str:
        if self.config.input_path == "-":
            data = sys.stdin.buffer.read()
        else:
            try:
                data = Path(self.config.input_path).read_bytes()
            except OSError as exc:
                raise ConfigError(f"cannot read input {self.config.input_path}: {exc}") from exc
        return decode_input(data)

    def run(self) -> int:
        """
        Execute the command.

        Returns:
            Process exit code
        """
        try:
            space = self.setup()
            result = self._handlers[self.config.command](space)
        except MagniPersistError as exc:
            self.console.print(exc.one_line(), markup=False, highlight=False, soft_wrap=True)
            logger.debug("run failed", exc_info=True)
            return exc.exit_code

        if self.config.export_space:
            result.exports[self.config.export_space] = emitters.format_distance_matrix(space)
        try:
            self._write(result)
        except OSError as exc:
            error = ConfigError(f"cannot write output: {exc}")
            self.console.print(error.one_line(), markup=False, highlight=False, soft_wrap=True)
            return error.exit_code
        if self.config.verbose and result.summary:
            self._print_summary(result.summary)
        return result.exit_code

    def _write(self, result: RunResult) -> None:
        for path, text in result.exports.items():
            Path(path).write_text(text)
            self.console.print(f"✓ Wrote {path}")
        if self.config.output_path:
            Path(self.config.output_path).write_text(result.output)
            self.console.print(f"✓ Wrote {self.config.output_path}")
        else:
            sys.stdout.write(result.output)
            sys.stdout.flush()

    def _print_summary(self, rows: list[tuple[str, str]]) -> None:
        table = Table(title=f"{self.config.command} summary")
        table.add_column("item", style="cyan", no_wrap=True)
        table.add_column("value")
        for key, value in rows:
            table.add_row(key, value)
        self.console.print(table)

    def _check_failure(self, result: RunResult, failures: int, what: str) -> RunResult:
        """Complete report, nonzero exit when any row failed."""
        if failures:
            error = InternalCheckFailed(f"{failures} {what} failed")
            self.console.print(error.one_line(), markup=False, highlight=False, soft_wrap=True)
            result.exit_code = error.exit_code
        return result

    # -------------------------------------------------------------------------
    # Commands
    # -------------------------------------------------------------------------

    def _run_magnitude(self, space: FiniteMetricSpace) -> RunResult:
        f = magnitude_rational(space)
        return RunResult(
            ExitCodes.OK,
            emitters.emit_magnitude(f),
            [("points", str(space.size)), ("exponent denominator", str(f.exponent_denominator))],
        )

    def _run_magfun(self, space: FiniteMetricSpace) -> RunResult:
        cfg = self.config
        table = magnitude_function_table(space, cfg.t_values, cfg.precision)
        return RunResult(
            ExitCodes.OK,
            emitters.emit_magnitude_function(table, cfg.precision),
            [("samples", str(len(table)))],
        )

    def _run_mh(self, space: FiniteMetricSpace) -> RunResult:
        cfg = self.config
        table = magnitude_homology(
            space, cfg.n_max, cfg.l_max, cfg.mode, cfg.max_generators, cfg.threads
        )
        nonzero = sum(1 for _, _, g in table.rows() if not g.is_zero)
        return RunResult(
            ExitCodes.OK,
            emitters.emit_mh_table(table),
            [("grades", str(len(table.spectrum))), ("nonzero groups", str(nonzero))],
        )

    def _run_euler(self, space: FiniteMetricSpace) -> RunResult:
        cfg = self.config
        report = euler_check(
            space, cfg.n_max, cfg.l_max, workers=cfg.threads, max_generators=cfg.max_generators
        )
        failures = sum(1 for row in report.rows if not row.ok)
        result = RunResult(
            ExitCodes.OK,
            emitters.emit_euler(report),
            [("grades", str(len(report.rows))), ("failures", str(failures))],
        )
        return self._check_failure(result, failures, "euler rows")

    def _run_ph(self, space: FiniteMetricSpace) -> RunResult:
        cfg = self.config
        complex = build_vietoris_rips(space, cfg.dim_max, cfg.eps_max, cfg.max_cells)
        barcode = reduce_persistence(complex, cfg.prime)
        result = RunResult(
            ExitCodes.OK,
            emitters.emit_barcode(barcode),
            [("cells", str(len(complex))), ("bars", str(len(barcode.bars)))],
        )
        if cfg.export_complex:
            result.exports[cfg.export_complex] = format_complex(complex)
        return result

    def _run_blurred(self, space: FiniteMetricSpace) -> RunResult:
        cfg = self.config
        barcode = blurred_mh(space, cfg.dim_max, cfg.eps_max, cfg.prime, cfg.max_cells)
        output = emitters.emit_barcode(barcode)
        result = RunResult(ExitCodes.OK, output, [("bars", str(len(barcode.bars)))])
        if cfg.export_complex:
            nerve = build_enriched_nerve(space, cfg.dim_max, cfg.eps_max, cfg.max_cells)
            result.exports[cfg.export_complex] = format_complex(nerve)
        if not cfg.check_coend:
            return result
        rows = compare_with_coend(space, cfg.dim_max, cfg.eps_max, cfg.prime, cfg.max_cells)
        failures = sum(1 for row in rows if not row.ok)
        result.output += "\n" + emitters.emit_level_comparison(rows)
        result.summary.append(("coend mismatches", str(failures)))
        return self._check_failure(result, failures, "coend level comparisons")

    def _run_limits(self, space: FiniteMetricSpace) -> RunResult:
        cfg = self.config
        nerve = limit_homology(space, cfg.k, Provenance.NERVE, cfg.prime)
        rips = limit_homology(space, cfg.k, Provenance.RIPS, cfg.prime)
        ordinary = ordinary_mh_limit(space, cfg.k)
        delta_min = min_positive_distance(space)
        return RunResult(
            ExitCodes.OK,
            emitters.emit_limits(cfg.k, nerve, rips, ordinary, delta_min),
            [("audited maps", str(len(ordinary.audits)))],
        )

    def _run_approx(self, space: FiniteMetricSpace) -> RunResult:
        cfg = self.config
        samples = cfg.sample_eps or default_samples(space)
        report = c_approximation_check(space, cfg.k, cfg.prime, samples)
        failures = sum(1 for d in report.diagram_checks if not d.passed)
        failures += sum(1 for i in report.inclusion_checks if not i.passed)
        result = RunResult(
            ExitCodes.OK,
            emitters.emit_approximation(report),
            [("diagrams", str(len(report.diagram_checks))), ("failures", str(failures))],
        )
        return self._check_failure(result, failures, "approximation checks")


def decode_input(data: bytes) -> str:
    """
    UTF-8 text of an input file.

    Raises:
        ParseError: positioned at the first undecodable byte
    """
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as exc:
        head = data[: exc.start]
        line = head.count(b"\n") + 1
        col = exc.start - (head.rfind(b"\n") + 1) + 1
        raise ParseError(line, col, "invalid UTF-8") from None


def default_samples(space: FiniteMetricSpace) -> list[Fraction]:
    """Half the smallest positive distance plus every distinct positive distance."""
    distances = sorted(
        {entry for row in space.dist for entry in row if entry is not INF and entry > 0}
    )
    if not distances:
        return [Fraction(0)]
    return [distances[0] / 2] + distances
