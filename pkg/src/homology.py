"""
Magnitude Homology

Grade-by-grade magnitude chain complex: in degree n and grade l it is free
on the tuples of length exactly l, and the boundary keeps only the faces that
preserve length. Integral homology per block comes from Smith normal forms.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil
from typing import Sequence

import numpy as np

from magnipersist.algebra.smith import smith_normal_form
from magnipersist.constants import ChainModes, MetricFlags
from magnipersist.errors import (
    InsufficientDegreeBound,
    InternalCheckFailed,
    ModeMismatch,
    ResourceBound,
    ValidationError,
)
from magnipersist.magnitude import magnitude_rational, magnitude_series
from magnipersist.metric import (
    INF,
    FiniteMetricSpace,
    PointTuple,
    is_nondegenerate,
    iter_tuples,
    length_spectrum,
    min_positive_distance,
    to_distance,
)

logger = logging.getLogger(__name__)

DEFAULT_MAX_GENERATORS = 200_000


@dataclass(frozen=True)
class HomologyGroup:
    """Z^rank ⊕ Z/t_1 ⊕ ... with t_1 | t_2 | ..."""

    rank: int = 0
    torsion: tuple[int, ...] = ()

    @property
    def is_zero(self) -> bool:
        return self.rank == 0 and not self.torsion

    def __str__(self) -> str:
        parts = [f"Z^{self.rank}"] if self.rank else []
        parts += [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class GradedChainBlock:
    """
    Degree-n, grade-l block: generators and the boundary matrix into the
    (n-1, l) block (rows = target generators, columns = these generators).
    """

    degree: int
    grade: Fraction
    mode: str
    generators: tuple[PointTuple, ...]
    boundary: np.ndarray


@dataclass
class MHTable:
    """Magnitude homology groups keyed by (degree, grade)."""

    n_max: int
    l_max: Fraction
    mode: str
    spectrum: list[Fraction]
    groups: dict[tuple[int, Fraction], HomologyGroup] = field(default_factory=dict)

    def group(self, n: int, grade: Fraction) -> HomologyGroup:
        """Grades outside the length spectrum are trivially zero."""
        return self.groups.get((n, Fraction(grade)), HomologyGroup())

    def euler_characteristic(self, grade: Fraction) -> int:
        return sum((-1) ** n * self.group(n, grade).rank for n in range(self.n_max + 1))

    def rows(self) -> list[tuple[int, Fraction, HomologyGroup]]:
        """(n, l, group) sorted by degree, then grade."""
        return [(n, l, g) for (n, l), g in sorted(self.groups.items())]


def _require_mode(mode: str) -> None:
    if mode not in ChainModes.ALL:
        raise ValidationError(f"unknown chain mode {mode!r}")


def _face_survives(space: FiniteMetricSpace, x: Sequence[int], i: int) -> bool:
    """Whether deleting x_i keeps the tuple length."""
    n = len(x) - 1
    d = space.dist
    if i == 0:
        return d[x[0]][x[1]] == 0
    if i == n:
        return d[x[n - 1]][x[n]] == 0
    return d[x[i - 1]][x[i + 1]] == d[x[i - 1]][x[i]] + d[x[i]][x[i + 1]]


def mh_generators(
    space: FiniteMetricSpace, n: int, l: object, mode: str = ChainModes.NORMALIZED
) -> list[PointTuple]:
    """
    All tuples of degree n and length exactly l, lexicographically ordered.

    Normalized mode excludes tuples with a consecutive repeat.
    """
    _require_mode(mode)
    grade = to_distance(l)
    if n < 0 or grade is INF or grade < 0:
        raise ValidationError(f"need n >= 0 and finite l >= 0, got n={n}, l={l}")
    return [
        t
        for t in iter_tuples(space, grade, n, nondegenerate=mode == ChainModes.NORMALIZED)
        if t.degree == n and t.grade == grade
    ]


def _boundary_matrix(
    space: FiniteMetricSpace,
    sources: Sequence[PointTuple],
    targets: Sequence[PointTuple],
    mode: str,
) -> np.ndarray:
    normalized = mode == ChainModes.NORMALIZED
    row_of = {t.indices: r for r, t in enumerate(targets)}
    matrix = np.zeros((len(targets), len(sources)), dtype=np.int64)
    for col, t in enumerate(sources):
        x = t.indices
        if len(x) == 1:
            continue
        for i in range(len(x)):
            if not _face_survives(space, x, i):
                continue
            face = x[:i] + x[i + 1 :]
            if normalized and not is_nondegenerate(face):
                continue
            row = row_of.get(face)
            if row is None:
                raise InternalCheckFailed(f"face {face} of {x} missing from grade {t.grade}")
            matrix[row, col] += -1 if i % 2 else 1
    return matrix


def mh_boundary(
    space: FiniteMetricSpace,
    n: int,
    l: object,
    mode: str = ChainModes.NORMALIZED,
    *,
    generators: Sequence[PointTuple] | None = None,
    targets: Sequence[PointTuple] | None = None,
) -> np.ndarray:
    """
    Length-preserving boundary from the (n, l) block to the (n-1, l) block.

    Interior face i survives iff d(x_{i-1}, x_{i+1}) = d(x_{i-1}, x_i) +
    d(x_i, x_{i+1}); the end faces survive only across a zero distance. In
    normalized mode faces landing on a degenerate tuple contribute 0.

    Raises:
        ModeMismatch: precomputed generators carry repeats in normalized mode
    """
    _require_mode(mode)
    if generators is None:
        generators = mh_generators(space, n, l, mode)
    if targets is None:
        targets = mh_generators(space, n - 1, l, mode) if n > 0 else []
    if mode == ChainModes.NORMALIZED:
        for t in list(generators) + list(targets):
            if not t.is_nondegenerate:
                raise ModeMismatch(f"degenerate generator {t} passed in normalized mode")
    return _boundary_matrix(space, generators, targets, mode)


def _block_homology(
    blocks: dict[int, GradedChainBlock], n_max: int
) -> dict[int, HomologyGroup]:
    """H_n = ker d_n / im d_{n+1} for n = 0..n_max, within one grade."""
    invariants: dict[int, list[int]] = {}
    for n in range(1, n_max + 2):
        block = blocks.get(n)
        if block is None or block.boundary.size == 0:
            invariants[n] = []
        else:
            snf = smith_normal_form(block.boundary, with_transforms=False)
            invariants[n] = snf.invariant_factors

    groups = {}
    for n in range(n_max + 1):
        block = blocks.get(n)
        dim = len(block.generators) if block else 0
        rank_out = len(invariants.get(n, []))
        incoming = invariants[n + 1]
        groups[n] = HomologyGroup(
            rank=dim - rank_out - len(incoming),
            torsion=tuple(d for d in incoming if d > 1),
        )
    return groups


def _check_square_zero(blocks: dict[int, GradedChainBlock]) -> None:
    for n, block in blocks.items():
        lower = blocks.get(n - 1)
        if lower is None or lower.boundary.size == 0 or block.boundary.size == 0:
            continue
        if np.any(lower.boundary @ block.boundary):
            raise InternalCheckFailed(
                f"boundary squares to nonzero at degree {n}, grade {block.grade}"
            )


def magnitude_homology(
    space: FiniteMetricSpace,
    n_max: int,
    l_max: object,
    mode: str = ChainModes.NORMALIZED,
    max_generators: int = DEFAULT_MAX_GENERATORS,
    workers: int = 1,
) -> MHTable:
    """
    Magnitude homology H_n at grade l for degrees 0..n_max and every grade of
    the length spectrum up to l_max.

    Generators of degree n_max + 1 are enumerated internally for the
    incoming boundary of the top degree.

    Raises:
        NotSeparated: normalized mode on a non-separated space
        ResourceBound: generator count exceeds ``max_generators``
        InternalCheckFailed: boundary of boundary is nonzero
    """
    _require_mode(mode)
    if n_max < 0:
        raise ValidationError(f"n_max must be non-negative, got {n_max}")
    space.require(MetricFlags.ZERO_DIAGONAL, MetricFlags.FINITE_DISTANCES)
    normalized = mode == ChainModes.NORMALIZED
    if normalized:
        space.require(MetricFlags.SEPARATED)
    bound = to_distance(l_max)
    spectrum = length_spectrum(space, n_max, bound)

    buckets: dict[tuple[int, Fraction], list[PointTuple]] = {}
    count = 0
    for t in iter_tuples(space, bound, n_max + 1, nondegenerate=normalized):
        count += 1
        if count > max_generators:
            raise ResourceBound("generators", count, max_generators)
        buckets.setdefault((t.degree, t.grade), []).append(t)
    logger.debug("enumerated %d generators over %d grades", count, len(spectrum))

    def grade_homology(grade: Fraction) -> dict[int, HomologyGroup]:
        blocks: dict[int, GradedChainBlock] = {}
        for n in range(n_max + 2):
            gens = buckets.get((n, grade), [])
            targets = buckets.get((n - 1, grade), []) if n > 0 else []
            boundary = _boundary_matrix(space, gens, targets, mode)
            blocks[n] = GradedChainBlock(n, grade, mode, tuple(gens), boundary)
        _check_square_zero(blocks)
        return _block_homology(blocks, n_max)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            per_grade = list(pool.map(grade_homology, spectrum))
    else:
        per_grade = [grade_homology(grade) for grade in spectrum]

    table = MHTable(n_max=n_max, l_max=bound, mode=mode, spectrum=spectrum)
    for grade, groups in zip(spectrum, per_grade):
        for n, group in groups.items():
            table.groups[(n, grade)] = group
    return table


# =============================================================================
# Euler characteristic check
# =============================================================================


@dataclass(frozen=True)
class EulerRow:
    grade: Fraction
    chi: int
    series_coeff: int
    expansion_coeff: Fraction

    @property
    def ok(self) -> bool:
        return self.chi == self.series_coeff == self.expansion_coeff


@dataclass(frozen=True)
class EulerReport:
    rows: tuple[EulerRow, ...]
    delta_min: Fraction | None

    @property
    def ok(self) -> bool:
        return all(row.ok for row in self.rows)


def required_degree_bound(space: FiniteMetricSpace, l_max: object) -> int:
    """Smallest n_max such that every tuple of length <= l_max has degree <= n_max."""
    delta = min_positive_distance(space)
    if delta is None:
        return 0
    return ceil(Fraction(to_distance(l_max)) / delta)


def euler_check(
    space: FiniteMetricSpace,
    n_max: int,
    l_max: object,
    table: MHTable | None = None,
    workers: int = 1,
    max_generators: int = DEFAULT_MAX_GENERATORS,
) -> EulerReport:
    """
    Per-grade comparison of the homological Euler characteristic with the
    signed tuple count and the power-series expansion of the magnitude.

    Raises:
        InsufficientDegreeBound: n_max < l_max / delta_min
    """
    bound = Fraction(to_distance(l_max))
    needed = required_degree_bound(space, bound)
    if n_max < needed:
        raise InsufficientDegreeBound(
            f"n_max={n_max} < {needed} needed to cover grades up to {bound}"
        )
    if table is None:
        table = magnitude_homology(
            space, n_max, bound, ChainModes.NORMALIZED, max_generators, workers
        )
    series = magnitude_series(space, bound)
    f = magnitude_rational(space)
    expansion = f.series_coefficients(int(bound * f.exponent_denominator))

    grades = set(table.spectrum)
    n = f.exponent_denominator
    grades.update(Fraction(e, n) for e, c in enumerate(expansion) if c)
    rows = []
    for grade in sorted(g for g in grades if g <= bound):
        scaled = grade * n
        exp_coeff = expansion[int(scaled)] if scaled.denominator == 1 else Fraction(0)
        rows.append(
            EulerRow(grade, table.euler_characteristic(grade), series.coefficient(grade), exp_coeff)
        )
    return EulerReport(tuple(rows), min_positive_distance(space))
