"""
Input readers: distance-matrix text, point-cloud text and snapping of point
clouds to exact rational metric spaces.
"""

from __future__ import annotations

import logging
import re
from fractions import Fraction
from math import isqrt
from typing import Iterable, Sequence

from magnipersist.constants import INF_TOKEN, MetricFlags, MetricKinds
from magnipersist.errors import (
    DimensionMismatch,
    ParseError,
    TriangleBrokenByRounding,
    ValidationError,
)
from magnipersist.metric import INF, Distance, FiniteMetricSpace, flag_witness, validate_space

logger = logging.getLogger(__name__)

LABELS_HEADER = "# labels:"


def parse_rational(token: str) -> Fraction:
    """``"3"``, ``"-2"`` or ``"p/q"`` as an exact Fraction."""
    text = token.strip()
    numerator, slash, denominator = text.partition("/")
    try:
        if slash:
            if not denominator.lstrip("+-").isdigit() or int(denominator) == 0:
                raise ValueError(text)
            return Fraction(int(numerator), int(denominator))
        return Fraction(int(numerator))
    except ValueError:
        raise ValueError(f"{token!r} is not an integer or fraction p/q") from None


def _parse_entry(token: str, line: int, col: int) -> Distance:
    if token == INF_TOKEN:
        return INF
    try:
        return parse_rational(token)
    except ValueError as exc:
        raise ParseError(line, col, str(exc)) from None


def _tokens(text: str) -> Iterable[tuple[int, int, str]]:
    """(line, col, token) with 1-based positions."""
    for line_no, line in enumerate(text.splitlines(), start=1):
        for match in re.finditer(r"\S+", line):
            yield line_no, match.start() + 1, match.group()


def parse_distance_matrix(
    text: str, require: Iterable[str] = MetricFlags.DEFAULT_REQUIRED
) -> FiniteMetricSpace:
    """
    Parse the distance-matrix text format.

    First line: point count m. Then m rows of m entries (integers, ``p/q``
    fractions or ``inf``). An optional ``# labels: a b c`` line may precede
    the rows; blank lines are skipped.

    Raises:
        ParseError: positioned at the offending token
    """
    lines = text.splitlines()
    labels: list[str] | None = None
    rows: list[tuple[int, str]] = []
    for line_no, raw in enumerate(lines, start=1):
        stripped = raw.strip()
        if not stripped:
            continue
        if stripped.startswith(LABELS_HEADER):
            labels = stripped[len(LABELS_HEADER) :].split()
            continue
        if stripped.startswith("#"):
            continue
        rows.append((line_no, raw))

    if not rows:
        raise ParseError(1, 1, "missing point count")
    count_line, count_text = rows[0]
    try:
        m = int(count_text.strip())
    except ValueError:
        reason = f"point count {count_text.strip()!r} is not an integer"
        raise ParseError(count_line, 1, reason) from None
    if m < 1:
        raise ParseError(count_line, 1, f"point count must be positive, got {m}")

    body = rows[1:]
    if len(body) != m:
        line = body[-1][0] + 1 if body else count_line + 1
        raise ParseError(line, 1, f"expected {m} matrix rows, found {len(body)}")

    matrix = []
    for line_no, raw in body:
        entries = [_parse_entry(tok, ln, col) for ln, col, tok in _tokens(raw)]
        if len(entries) != m:
            raise ParseError(line_no, 1, f"expected {m} entries, found {len(entries)}")
        matrix.append(entries)

    if labels is not None and len(labels) != m:
        raise ParseError(1, 1, f"{len(labels)} labels for {m} points")
    return validate_space(matrix, require=require, labels=labels)


def parse_point_cloud(text: str) -> list[tuple[Fraction, ...]]:
    """
    One point per line, whitespace-separated rational coordinates.

    Blank lines and ``#`` comments are skipped.

    Raises:
        ParseError, DimensionMismatch
    """
    points: list[tuple[Fraction, ...]] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip() or raw.strip().startswith("#"):
            continue
        coords = []
        for _, col, token in _tokens(raw):
            try:
                coords.append(parse_rational(token))
            except ValueError as exc:
                raise ParseError(line_no, col, str(exc)) from None
        if points and len(coords) != len(points[0]):
            raise DimensionMismatch(
                f"line {line_no} has {len(coords)} coordinates, expected {len(points[0])}"
            )
        points.append(tuple(coords))
    if not points:
        raise ParseError(1, 1, "no points")
    return points


def parse_metric_kind(text: str) -> tuple[str, int | None]:
    """``l1``, ``linf`` or ``euclid:D`` as (kind, denominator)."""
    kind, _, denominator = text.partition(":")
    if kind in (MetricKinds.L1, MetricKinds.LINF) and not denominator:
        return kind, None
    if kind == MetricKinds.EUCLID_SNAPPED:
        try:
            d = int(denominator)
        except ValueError:
            raise ValidationError(
                f"euclid metric needs an integer denominator, got {text!r}"
            ) from None
        if d < 1:
            raise ValidationError(f"snapping denominator must be >= 1, got {d}")
        return kind, d
    raise ValidationError(f"unknown metric {text!r}; expected l1, linf or euclid:D")


def _rounded_sqrt(value: Fraction, denominator: int) -> Fraction:
    """sqrt(value) rounded half up to a multiple of 1/denominator, exactly."""
    # floor(D sqrt(v) + 1/2) == (isqrt(floor(4 D^2 v)) + 1) // 2
    scaled = value * 4 * denominator * denominator
    root = isqrt(scaled.numerator // scaled.denominator)
    return Fraction((root + 1) // 2, denominator)


def snap_point_cloud(
    points: Sequence[Sequence[object]],
    metric: str,
    denominator: int | None = None,
    labels: Sequence[str] | None = None,
) -> FiniteMetricSpace:
    """
    Exact rational metric space from coordinates.

    L1 and Linf distances are exact. ``euclid`` rounds each Euclidean distance
    to the nearest multiple of 1/denominator, re-checks the triangle
    inequality and attaches a warning to the space.

    Raises:
        DimensionMismatch, TriangleBrokenByRounding
    """
    coords = [tuple(Fraction(c) for c in p) for p in points]
    if not coords:
        raise ValidationError("empty point cloud")
    dim = len(coords[0])
    for i, p in enumerate(coords):
        if len(p) != dim:
            raise DimensionMismatch(f"point {i} has {len(p)} coordinates, expected {dim}")

    if metric == MetricKinds.EUCLID_SNAPPED and (denominator is None or denominator < 1):
        raise ValidationError("euclid metric needs a denominator >= 1")

    def distance(a: tuple[Fraction, ...], b: tuple[Fraction, ...]) -> Fraction:
        diffs = [abs(x - y) for x, y in zip(a, b)]
        if metric == MetricKinds.L1:
            return sum(diffs, Fraction(0))
        if metric == MetricKinds.LINF:
            return max(diffs, default=Fraction(0))
        if metric == MetricKinds.EUCLID_SNAPPED:
            return _rounded_sqrt(sum((x * x for x in diffs), Fraction(0)), denominator)
        raise ValidationError(f"unknown metric {metric!r}")

    matrix = [[distance(a, b) for b in coords] for a in coords]
    warnings: tuple[str, ...] = ()
    if metric == MetricKinds.EUCLID_SNAPPED:
        witness = flag_witness(matrix, MetricFlags.TRIANGLE_OK)
        if witness:
            raise TriangleBrokenByRounding(witness, denominator)
        warnings = (
            f"WARNING: Euclidean distances snapped to multiples of 1/{denominator}; "
            "which triangle inequalities are strict equalities, and hence magnitude "
            "homology, depends on this denominator",
        )
        logger.warning(warnings[0])

    space = validate_space(matrix, labels=labels)
    return FiniteMetricSpace(space.point_labels, space.dist, space.flags, warnings)
