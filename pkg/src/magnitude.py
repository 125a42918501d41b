"""
Magnitude

Exact magnitude of a finite metric space as a rational function of q, the
magnitude function t -> |tX| evaluated at q = e^(-t), and the grade-indexed
signed tuple count whose power-series agreement with the rational function is
the desk-scale categorification check.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import floor, lcm
from typing import Sequence

import mpmath
from sympy import Poly
from sympy.polys.domains import ZZ
from sympy.polys.matrices import DomainMatrix

from magnipersist.algebra.rational_function import U, RationalFunctionQ, poly_from_terms
from magnipersist.constants import MetricFlags
from magnipersist.errors import (
    InternalCheckFailed,
    NonPositiveScale,
    PoleAtEvaluationPoint,
    SingularZeta,
    ValidationError,
    ZeroMinimumDistance,
)
from magnipersist.metric import INF, FiniteMetricSpace, iter_tuples, to_distance

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ZetaMatrix:
    """
    Zeta matrix q^(d(x_i, x_j)) encoded as monomials u^(e_ij), u = q^(1/N).
    """

    size: int
    exponents: tuple[tuple[int, ...], ...]
    exponent_denominator: int

    def to_domain_matrix(self) -> DomainMatrix:
        """Matrix over the polynomial ring ZZ[u]."""
        ring = ZZ[U]
        u = ring.gens[0]
        rows = [[u**e for e in row] for row in self.exponents]
        return DomainMatrix(rows, (self.size, self.size), ring)


@dataclass(frozen=True)
class GradedSeries:
    """Truncated grade-indexed series: (grade, coefficient), grades increasing."""

    terms: tuple[tuple[Fraction, int], ...]
    l_max: Fraction

    def coefficient(self, grade: Fraction) -> int:
        for g, c in self.terms:
            if g == grade:
                return c
        return 0

    @property
    def grades(self) -> list[Fraction]:
        return [g for g, _ in self.terms]


@dataclass(frozen=True)
class SeriesComparison:
    """Result of comparing a GradedSeries against a power-series expansion."""

    matches: bool
    # (grade, series coefficient, expansion coefficient) of the first disagreement
    first_mismatch: tuple[Fraction, int, Fraction] | None


def zeta_matrix(space: FiniteMetricSpace) -> ZetaMatrix:
    """
    Encode q^(d_ij) as u-monomials with N the lcm of all distance denominators.

    Raises:
        InfiniteDistance: some distance is infinite
    """
    space.require(MetricFlags.FINITE_DISTANCES, MetricFlags.ZERO_DIAGONAL)
    n = lcm(1, *(entry.denominator for row in space.dist for entry in row))
    exponents = tuple(tuple(int(entry * n) for entry in row) for row in space.dist)
    return ZetaMatrix(space.size, exponents, n)


def _to_poly(element: object) -> Poly:
    """ZZ[u] ring element -> integer Poly in u."""
    return poly_from_terms({monom[0]: int(coeff) for monom, coeff in dict(element).items()})


def magnitude_rational(space: FiniteMetricSpace) -> RationalFunctionQ:
    """
    Sum of all entries of the inverse zeta matrix, as a reduced rational function.

    The entry sum of adj(Z) is read off the bordered determinant
    det([[Z, 1], [1^T, 0]]) = -1^T adj(Z) 1, so only two fraction-free
    determinants over ZZ[u] are needed.

    Raises:
        SingularZeta: det(Z) vanishes in ZZ[u]
    """
    zeta = zeta_matrix(space)
    m = zeta.size
    Z = zeta.to_domain_matrix()
    ring = Z.domain

    det = Z.det()
    if not det:
        raise SingularZeta(f"zeta matrix of the {m}-point space is singular")

    u = ring.gens[0]
    bordered_rows = [[u**e for e in row] + [ring.one] for row in zeta.exponents]
    bordered_rows.append([ring.one] * m + [ring.zero])
    bordered = DomainMatrix(bordered_rows, (m + 1, m + 1), ring)
    adjugate_sum = -bordered.det()

    numerator = _to_poly(adjugate_sum)
    denominator = _to_poly(det)
    result = RationalFunctionQ.from_polys(numerator, denominator, zeta.exponent_denominator)
    logger.debug("magnitude of %d-point space: %s", m, result)
    return result


def _numeric_zeta_inverse_sum(space: FiniteMetricSpace, t: Fraction) -> mpmath.mpf:
    """Entry sum of the inverse of the real matrix e^(-t d_ij)."""
    m = space.size
    scale = mpmath.mpf(t.numerator) / t.denominator
    Z = mpmath.matrix(m, m)
    for i in range(m):
        for j in range(m):
            d = space.dist[i][j]
            Z[i, j] = mpmath.exp(-scale * mpmath.mpf(d.numerator) / d.denominator)
    try:
        w = mpmath.lu_solve(Z, mpmath.matrix([1] * m))
    except ZeroDivisionError as exc:
        raise PoleAtEvaluationPoint(f"zeta matrix singular at t={t}") from exc
    return mpmath.fsum(w)


def magnitude_function_eval(
    space: FiniteMetricSpace, t: object, precision: int = 15
) -> mpmath.mpf:
    """
    Magnitude function at t, i.e. the magnitude evaluated at q = e^(-t).

    Evaluates the reduced rational function and cross-checks against a
    direct numeric inversion of the real zeta matrix.

    Args:
        space: Finite metric space
        t: Positive rational scale
        precision: Decimal digits that must be correct

    Returns:
        mpmath value (computed with guard digits)

    Raises:
        PoleAtEvaluationPoint: denominator vanishes within precision
    """
    t = to_distance(t)
    if t is INF or t <= 0:
        raise NonPositiveScale(f"t = {t} must be a positive rational")
    f = magnitude_rational(space)
    tolerance = mpmath.mpf(10) ** (-precision)
    with mpmath.workdps(precision + 10):
        num, den = f.evaluate_at_t(t)
        if abs(den) < tolerance:
            raise PoleAtEvaluationPoint(f"denominator vanishes at t={t}")
        value = num / den
        direct = _numeric_zeta_inverse_sum(space, t)
        if abs(value - direct) > tolerance * max(1, abs(value)):
            raise InternalCheckFailed(
                f"magnitude paths disagree at t={t}: {mpmath.nstr(value, precision)} "
                f"vs {mpmath.nstr(direct, precision)}"
            )
    return value


def magnitude_function_table(
    space: FiniteMetricSpace, ts: Sequence[object], precision: int = 15
) -> list[tuple[Fraction, mpmath.mpf]]:
    """Sample the magnitude function on the given t values."""
    return [(Fraction(to_distance(t)), magnitude_function_eval(space, t, precision)) for t in ts]


def magnitude_series(space: FiniteMetricSpace, l_max: object) -> GradedSeries:
    """
    Signed tuple count per grade.

    The coefficient of q^l is the sum over n of (-1)^n times the number of
    nondegenerate tuples of degree n with length exactly l, for l <= l_max.

    Raises:
        NotSeparated, ZeroMinimumDistance
    """
    bound = to_distance(l_max)
    if bound is INF or bound < 0:
        raise ValidationError(f"l_max = {l_max} must be a non-negative rational")
    space.require(MetricFlags.ZERO_DIAGONAL)
    if not space.flags.separated:
        m = space.size
        one_sided = [
            (i, j)
            for i in range(m)
            for j in range(m)
            if i != j and space.dist[i][j] == 0 and space.dist[j][i] != 0
        ]
        if one_sided:
            raise ZeroMinimumDistance(f"zero one-way distance at {one_sided[0]}")
        space.require(MetricFlags.SEPARATED)

    counts: dict[Fraction, int] = {}
    for t in iter_tuples(space, bound, nondegenerate=True):
        sign = -1 if t.degree % 2 else 1
        counts[t.grade] = counts.get(t.grade, 0) + sign
    terms = tuple((g, c) for g, c in sorted(counts.items()) if c)
    return GradedSeries(terms, bound)


def series_matches_rational(
    series: GradedSeries, f: RationalFunctionQ, l_max: object
) -> SeriesComparison:
    """
    Compare a graded series with the power-series expansion of ``f``.

    Every exponent u^e, e <= N * l_max, is compared with the series
    coefficient at grade e / N. Grades beyond the series' own truncation are
    not compared.
    """
    bound = min(Fraction(to_distance(l_max)), series.l_max)
    n = f.exponent_denominator
    max_exponent = floor(bound * n)
    expansion = f.series_coefficients(max_exponent)

    for g, c in series.terms:
        if g <= bound and (g * n).denominator != 1:
            return SeriesComparison(False, (g, c, Fraction(0)))
    for e, coeff in enumerate(expansion):
        grade = Fraction(e, n)
        observed = series.coefficient(grade)
        if observed != coeff:
            return SeriesComparison(False, (grade, observed, coeff))
    return SeriesComparison(True, None)

