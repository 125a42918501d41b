"""
Blurred magnitude homology.

The persistent homology of the enriched nerve, and an independent chain
complex built from all tuples of length <= eps used to cross-check it one
filtration level at a time.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from magnipersist.algebra.finite_field import rank_mod_p, require_prime
from magnipersist.constants import MetricFlags
from magnipersist.errors import InternalCheckFailed, ResourceBound, ValidationError
from magnipersist.metric import (
    INF,
    FiniteMetricSpace,
    is_nondegenerate,
    to_distance,
    tuple_length,
)
from magnipersist.persistence.complex import (
    DEFAULT_MAX_CELLS,
    build_enriched_nerve,
    critical_values,
)
from magnipersist.persistence.reduction import Barcode, reduce_persistence

logger = logging.getLogger(__name__)


def blurred_mh(
    space: FiniteMetricSpace,
    dim_max: int,
    eps_max: object,
    p: int = 2,
    max_cells: int = DEFAULT_MAX_CELLS,
) -> Barcode:
    """Barcode of the enriched nerve; degrees < dim_max are complete."""
    return reduce_persistence(build_enriched_nerve(space, dim_max, eps_max, max_cells), p)


@dataclass
class CoendComplex:
    """
    Chain complex of all tuples of length <= eps up to degree n_max.

    ``boundaries[n]`` maps degree-n generators to degree-(n-1) generators.
    """

    eps: Fraction
    n_max: int
    include_degenerate: bool
    generators: dict[int, list[tuple[int, ...]]] = field(default_factory=dict)
    boundaries: dict[int, np.ndarray] = field(default_factory=dict)

    def dimension(self, n: int) -> int:
        return len(self.generators.get(n, []))

    def betti_numbers(self, p: int = 2) -> list[int]:
        """
        Ranks of H_0..H_{n_max - 1} over F_p (H_{n_max} would need degree n_max + 1).
        """
        require_prime(p)
        ranks = {n: rank_mod_p(matrix, p) for n, matrix in self.boundaries.items()}
        return [
            self.dimension(n) - ranks.get(n, 0) - ranks.get(n + 1, 0) for n in range(self.n_max)
        ]


def coend_complex_at(
    space: FiniteMetricSpace,
    eps: object,
    n_max: int,
    include_degenerate: bool = False,
    max_cells: int = DEFAULT_MAX_CELLS,
) -> CoendComplex:
    """
    Build the blurred chain complex at a single level ``eps``.

    Generators are enumerated by brute force over all index tuples rather than
    through the nerve builder, and the boundary is the full alternating sum of
    face deletions. With ``include_degenerate`` the tuples with consecutive
    repeats are kept, giving the unnormalized complex.

    Raises:
        ResourceBound: more than ``max_cells`` generators
        InternalCheckFailed: boundary of boundary is nonzero
    """
    level = to_distance(eps)
    if level is INF or level < 0:
        raise ValidationError(f"eps = {eps} must be a finite non-negative rational")
    if n_max < 0:
        raise ValidationError(f"n_max must be non-negative, got {n_max}")
    space.require(MetricFlags.ZERO_DIAGONAL, MetricFlags.TRIANGLE_OK)
    if not include_degenerate:
        space.require(MetricFlags.SEPARATED)

    complex = CoendComplex(level, n_max, include_degenerate)
    total = 0
    for n in range(n_max + 1):
        gens = []
        for t in itertools.product(range(space.size), repeat=n + 1):
            if not include_degenerate and not is_nondegenerate(t):
                continue
            if tuple_length(space, t) <= level:
                gens.append(t)
        total += len(gens)
        if total > max_cells:
            raise ResourceBound("cells", total, max_cells)
        complex.generators[n] = gens

    for n in range(1, n_max + 1):
        row_of = {t: r for r, t in enumerate(complex.generators[n - 1])}
        matrix = np.zeros((len(row_of), len(complex.generators[n])), dtype=np.int64)
        for col, t in enumerate(complex.generators[n]):
            for i in range(n + 1):
                face = t[:i] + t[i + 1 :]
                if face not in row_of:
                    if include_degenerate or is_nondegenerate(face):
                        raise InternalCheckFailed(f"face {face} of {t} exceeds eps={level}")
                    continue
                matrix[row_of[face], col] += -1 if i % 2 else 1
        complex.boundaries[n] = matrix

    for n in range(2, n_max + 1):
        lower, upper = complex.boundaries[n - 1], complex.boundaries[n]
        if lower.size and upper.size and np.any(lower @ upper):
            raise InternalCheckFailed(f"coend boundary squares to nonzero at degree {n}")

    logger.debug("coend complex at eps=%s: %d generators", level, total)
    return complex


@dataclass(frozen=True)
class LevelComparison:
    eps: Fraction
    degree: int
    coend_rank: int
    bars_alive: int

    @property
    def ok(self) -> bool:
        return self.coend_rank == self.bars_alive


def compare_with_coend(
    space: FiniteMetricSpace,
    dim_max: int,
    eps_max: object,
    p: int = 2,
    max_cells: int = DEFAULT_MAX_CELLS,
) -> list[LevelComparison]:
    """
    At every critical value, compare coend Betti numbers with the number of
    blurred bars alive, for degrees k < dim_max.
    """
    nerve = build_enriched_nerve(space, dim_max, eps_max, max_cells)
    barcode = reduce_persistence(nerve, p)
    rows = []
    for eps in critical_values(nerve):
        betti = coend_complex_at(space, eps, dim_max, max_cells=max_cells).betti_numbers(p)
        for k, rank in enumerate(betti):
            rows.append(LevelComparison(eps, k, rank, barcode.betti_at(k, eps)))
    return rows
