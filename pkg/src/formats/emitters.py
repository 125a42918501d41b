"""
Deterministic text emitters for every result type.

All emitters return strings ending in a newline; rationals print as ``p/q``
(or an integer), infinity as ``inf``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import mpmath

from magnipersist.algebra.rational_function import RationalFunctionQ
from magnipersist.formats.readers import LABELS_HEADER
from magnipersist.homology import EulerReport, MHTable
from magnipersist.limits import ApproximationReport, OrdinaryLimit
from magnipersist.metric import FiniteMetricSpace
from magnipersist.persistence.blurred import LevelComparison
from magnipersist.persistence.reduction import Barcode


def _tsv(header: Sequence[str], rows: Sequence[Sequence[object]]) -> str:
    lines = ["\t".join(header)]
    lines += ["\t".join(str(v) for v in row) for row in rows]
    return "\n".join(lines) + "\n"


def _bool(value: bool) -> str:
    return "true" if value else "false"


def format_distance_matrix(space: FiniteMetricSpace) -> str:
    """Matrix text format with a labels header; parses back to an equal space."""
    lines = [f"{LABELS_HEADER} {' '.join(space.point_labels)}", str(space.size)]
    lines += [" ".join(str(entry) for entry in row) for row in space.dist]
    return "\n".join(lines) + "\n"


def emit_magnitude(f: RationalFunctionQ) -> str:
    return f.to_text() + "\n"


def emit_magnitude_function(table: Sequence[tuple[Fraction, object]], precision: int) -> str:
    return _tsv(("t", "value"), [(t, mpmath.nstr(v, precision)) for t, v in table])


def emit_mh_table(table: MHTable) -> str:
    rows = [
        (n, l, group.rank, ",".join(str(t) for t in group.torsion))
        for n, l, group in table.rows()
    ]
    return _tsv(("n", "l", "rank", "torsion"), rows)


def emit_euler(report: EulerReport) -> str:
    rows = [
        (r.grade, r.chi, r.series_coeff, r.expansion_coeff, _bool(r.ok)) for r in report.rows
    ]
    return _tsv(("l", "chi", "series_coeff", "expansion_coeff", "ok"), rows)


def emit_barcode(barcode: Barcode) -> str:
    """Barcode TSV followed by one comment line per incomplete degree."""
    text = _tsv(("k", "birth", "death"), [(b.k, b.birth, b.death) for b in barcode.bars])
    for k in barcode.incomplete_degrees:
        text += f"# incomplete degree: {k}\n"
    return text


def emit_level_comparison(rows: Sequence[LevelComparison]) -> str:
    return _tsv(
        ("eps", "k", "coend_rank", "bars_alive", "ok"),
        [(r.eps, r.degree, r.coend_rank, r.bars_alive, _bool(r.ok)) for r in rows],
    )


def emit_limits(
    k: int, nerve: int, rips: int, ordinary: OrdinaryLimit, delta_min: Fraction | None
) -> str:
    delta = "-" if delta_min is None else delta_min
    return _tsv(
        ("k", "nerve", "rips", "ordinary", "delta_min"),
        [(k, nerve, rips, ordinary.rank, delta)],
    )


def emit_approximation(report: ApproximationReport) -> str:
    """Plain-text summary followed by the per-diagram and per-inclusion TSV."""
    delta = "-" if report.delta_min is None else report.delta_min
    lines = [
        f"k: {report.k}",
        f"c: {report.c}",
        f"sampled eps: {' '.join(str(e) for e in report.sampled_eps) or '-'}",
        f"stabilization threshold (delta_min): {delta}",
        f"limit nerve: {report.limit_nerve}",
        f"limit rips: {report.limit_rips}",
        f"all checks passed: {_bool(report.all_passed)}",
        f"isomorphic: {_bool(report.isomorphic)}",
        "",
    ]
    diagrams = _tsv(
        ("diagram", "eps", "next_eps", "levels", "passed"),
        [
            (
                d.diagram,
                d.eps,
                "-" if d.next_eps is None else d.next_eps,
                ",".join(f"{which}@{eps}" for which, eps in d.levels),
                _bool(d.passed),
            )
            for d in report.diagram_checks
        ],
    )
    inclusions = _tsv(
        ("inclusion", "level", "eps", "violations", "passed"),
        [
            (i.inclusion, i.level, i.eps, i.violations, _bool(i.passed))
            for i in report.inclusion_checks
        ],
    )
    return "\n".join(lines) + diagrams + inclusions
