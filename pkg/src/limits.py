"""
Limit Comparisons

Stabilized small-scale homology of the nerve and Vietoris-Rips filtrations,
the limit of ordinary magnitude homology with its connecting-map audit, and
a containment-level check of the (k+1)-approximation between the two
filtrations.

All maps involved are inclusions of cell sets, so every commuting diagram is
decided by exact set containment of rational-filtered cells.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from magnipersist.algebra.finite_field import require_prime
from magnipersist.constants import ChainModes, MetricFlags, Provenance
from magnipersist.errors import InternalCheckFailed, ValidationError
from magnipersist.homology import mh_generators
from magnipersist.metric import (
    INF,
    FiniteMetricSpace,
    diameter,
    is_nondegenerate,
    length_spectrum,
    min_positive_distance,
    to_distance,
)
from magnipersist.persistence.complex import (
    FilteredComplex,
    build_enriched_nerve,
    build_vietoris_rips,
)
from magnipersist.persistence.reduction import reduce_persistence

logger = logging.getLogger(__name__)

TupleSet = set[tuple[int, ...]]


def _build(space: FiniteMetricSpace, which: str, dim_max: int, eps: Fraction) -> FilteredComplex:
    if which == Provenance.NERVE:
        return build_enriched_nerve(space, dim_max, eps)
    if which == Provenance.RIPS:
        return build_vietoris_rips(space, dim_max, eps)
    raise ValidationError(f"unknown filtration {which!r}; expected one of {Provenance.ALL}")


def limit_homology(space: FiniteMetricSpace, k: int, which: str, p: int = 2) -> int:
    """
    Rank of H_k of the chosen filtration below the smallest positive distance.

    The system is constant on [0, delta_min), so it is evaluated at eps = 0.
    """
    if k < 0:
        raise ValidationError(f"homology degree must be non-negative, got {k}")
    require_prime(p)
    space.require(MetricFlags.SEPARATED)
    barcode = reduce_persistence(_build(space, which, k + 1, Fraction(0)), p)
    return barcode.betti_at(k, Fraction(0))


@dataclass(frozen=True)
class ConnectingMapAudit:
    grade: Fraction
    next_grade: Fraction
    nonzero_entries: int

    @property
    def is_zero(self) -> bool:
        return self.nonzero_entries == 0


@dataclass(frozen=True)
class OrdinaryLimit:
    k: int
    rank: int
    audits: tuple[ConnectingMapAudit, ...]


def ordinary_mh_limit(
    space: FiniteMetricSpace, k: int, l_max: object | None = None
) -> OrdinaryLimit:
    """
    Limit of ordinary magnitude homology in degree k, with its audit.

    For every consecutive pair of grades l < l' in the length spectrum the map
    induced on degree-k generators is built entrywise (1 exactly when the
    generator is the same tuple on both sides). A generator has a single
    length, so every such map must be zero and the limit is 0.

    Raises:
        InternalCheckFailed: some audited map is nonzero
    """
    if k < 0:
        raise ValidationError(f"homology degree must be non-negative, got {k}")
    space.require(MetricFlags.SEPARATED)
    n_max = k + 2
    bound = to_distance(l_max) if l_max is not None else n_max * diameter(space)
    spectrum = length_spectrum(space, n_max, bound)

    generators = {
        grade: {t.indices for t in mh_generators(space, k, grade, ChainModes.NORMALIZED)}
        for grade in spectrum
    }
    audits = []
    for grade, next_grade in zip(spectrum, spectrum[1:]):
        shared = len(generators[grade] & generators[next_grade])
        audits.append(ConnectingMapAudit(grade, next_grade, shared))
        if shared:
            raise InternalCheckFailed(
                f"connecting map H_{k} at grade {grade} -> {next_grade}"
                f" has {shared} nonzero entries"
            )
    logger.debug("ordinary limit in degree %d: %d audited maps", k, len(audits))
    return OrdinaryLimit(k, 0, tuple(audits))


def separation_witness(space: FiniteMetricSpace, p: int = 2) -> tuple[int, int]:
    """(blurred limit rank, ordinary limit rank) in degree 0."""
    return (
        limit_homology(space, 0, Provenance.NERVE, p),
        ordinary_mh_limit(space, 0).rank,
    )


# =============================================================================
# Approximation check
# =============================================================================


class Diagrams:
    """Identifiers of the commuting diagrams of a c-approximation."""

    TRIANGLE_PHI = "triangle_phi"
    TRIANGLE_PSI = "triangle_psi"
    SQUARE_PHI = "square_phi"
    SQUARE_PSI = "square_psi"


@dataclass(frozen=True)
class DiagramCheck:
    diagram: str
    eps: Fraction
    passed: bool
    # second level of a square, None for triangles
    next_eps: Fraction | None = None
    # (provenance, eps) of every complex the diagram composes through
    levels: tuple[tuple[str, Fraction], ...] = ()


@dataclass(frozen=True)
class InclusionCheck:
    eps: Fraction
    inclusion: str
    level: str
    violations: int

    @property
    def passed(self) -> bool:
        return self.violations == 0


@dataclass
class ApproximationReport:
    k: int
    c: int
    sampled_eps: list[Fraction]
    limit_nerve: int
    limit_rips: int
    delta_min: Fraction | None
    diagram_checks: list[DiagramCheck] = field(default_factory=list)
    inclusion_checks: list[InclusionCheck] = field(default_factory=list)

    @property
    def all_passed(self) -> bool:
        return all(d.passed for d in self.diagram_checks) and all(
            i.passed for i in self.inclusion_checks
        )

    @property
    def isomorphic(self) -> bool:
        return self.all_passed and self.limit_nerve == self.limit_rips


class _Levels:
    """Cached nerve cells, Rips cells and tuple-level Rips sets per eps."""

    def __init__(self, space: FiniteMetricSpace, dim_max: int):
        self.space = space
        self.dim_max = dim_max
        self._nerve: dict[Fraction, TupleSet] = {}
        self._rips: dict[Fraction, TupleSet] = {}
        self._rips_tuples: dict[Fraction, TupleSet] = {}

    def nerve(self, eps: Fraction) -> TupleSet:
        if eps not in self._nerve:
            self._nerve[eps] = build_enriched_nerve(self.space, self.dim_max, eps).vertex_tuples()
        return self._nerve[eps]

    def rips(self, eps: Fraction) -> TupleSet:
        if eps not in self._rips:
            self._rips[eps] = build_vietoris_rips(self.space, self.dim_max, eps).vertex_tuples()
        return self._rips[eps]

    def rips_tuples(self, eps: Fraction) -> TupleSet:
        """Consecutive-distinct tuples of degree <= dim_max with all pairwise distances <= eps."""
        if eps not in self._rips_tuples:
            d = self.space.dist
            found: TupleSet = set()
            for n in range(self.dim_max + 1):
                for t in itertools.product(range(self.space.size), repeat=n + 1):
                    if is_nondegenerate(t) and all(
                        d[a][b] is not INF and d[a][b] <= eps for a in t for b in t
                    ):
                        found.add(t)
            self._rips_tuples[eps] = found
        return self._rips_tuples[eps]


def _violations(source: Iterable[tuple[int, ...]], target: TupleSet) -> int:
    return sum(1 for t in source if t not in target)


def _vertex_set(t: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(sorted(set(t)))


def _parse_samples(sample_eps: Iterable[object]) -> list[Fraction]:
    samples = set()
    for value in sample_eps:
        eps = to_distance(value)
        if eps is INF or eps < 0:
            raise ValidationError(f"sampled eps {value} must be a finite non-negative rational")
        samples.add(eps)
    return sorted(samples)


def c_approximation_check(
    space: FiniteMetricSpace,
    k: int,
    p: int = 2,
    sample_eps: Iterable[object] = (),
) -> ApproximationReport:
    """
    Check the (k+1)-approximation between nerve and Rips at sampled scales.

    With c = k + 1, phi_eps: N(eps) -> V(c eps) and psi_eps: V(eps) -> N(c eps)
    are inclusions of complexes truncated at dimension k + 1. The inclusions
    N(eps) -> V(eps) and V(eps) -> N(c eps) behind them are verified
    at cell level (nerve vertex sets are Rips simplices, increasing Rips tuples
    are nerve cells) and at tuple level. Each triangle composes through c eps
    to c^2 eps and is compared with the structure map eps -> c^2 eps; each
    square is the naturality of phi or psi between two sampled scales. Every
    containment a diagram composes is checked.

    Raises:
        NotSymmetric, NotSeparated
    """
    if k < 0:
        raise ValidationError(f"homology degree must be non-negative, got {k}")
    require_prime(p)
    space.require(MetricFlags.SYMMETRIC, MetricFlags.SEPARATED)
    c = k + 1
    samples = _parse_samples(sample_eps)
    levels = _Levels(space, k + 1)
    nerve, rips = Provenance.NERVE, Provenance.RIPS

    report = ApproximationReport(
        k=k,
        c=c,
        sampled_eps=samples,
        limit_nerve=limit_homology(space, k, Provenance.NERVE, p),
        limit_rips=limit_homology(space, k, Provenance.RIPS, p),
        delta_min=min_positive_distance(space),
    )

    for eps in samples:
        ceps, c2eps = c * eps, c * c * eps
        n_eps, n_ceps, n_c2eps = levels.nerve(eps), levels.nerve(ceps), levels.nerve(c2eps)
        v_eps, v_ceps, v_c2eps = (
            levels.rips_tuples(eps),
            levels.rips_tuples(ceps),
            levels.rips_tuples(c2eps),
        )
        cell_phi = _violations(map(_vertex_set, n_eps), levels.rips(eps))
        report.inclusion_checks += [
            InclusionCheck(eps, "nerve->rips", "cell", cell_phi),
            InclusionCheck(eps, "rips->nerve", "cell", _violations(levels.rips(eps), n_ceps)),
            InclusionCheck(eps, "nerve->rips", "tuple", _violations(n_eps, v_eps)),
            InclusionCheck(eps, "rips->nerve", "tuple", _violations(v_eps, n_ceps)),
        ]

        # psi after phi is the nerve's own map eps -> c^2 eps, and symmetrically
        triangle_phi = n_eps <= v_ceps and v_ceps <= n_c2eps and n_eps <= n_c2eps
        triangle_psi = v_eps <= n_ceps and n_ceps <= v_c2eps and v_eps <= v_c2eps
        report.diagram_checks += [
            DiagramCheck(
                Diagrams.TRIANGLE_PHI,
                eps,
                triangle_phi,
                levels=((nerve, eps), (rips, ceps), (nerve, c2eps)),
            ),
            DiagramCheck(
                Diagrams.TRIANGLE_PSI,
                eps,
                triangle_psi,
                levels=((rips, eps), (nerve, ceps), (rips, c2eps)),
            ),
        ]

    for eps, later in zip(samples, samples[1:]):
        ceps, clater = c * eps, c * later
        n_eps, n_later = levels.nerve(eps), levels.nerve(later)
        v_eps, v_later = levels.rips_tuples(eps), levels.rips_tuples(later)
        n_ceps, n_clater = levels.nerve(ceps), levels.nerve(clater)
        v_ceps, v_clater = levels.rips_tuples(ceps), levels.rips_tuples(clater)
        square_phi = (
            n_eps <= n_later and n_later <= v_clater and n_eps <= v_ceps and v_ceps <= v_clater
        )
        square_psi = (
            v_eps <= v_later and v_later <= n_clater and v_eps <= n_ceps and n_ceps <= n_clater
        )
        report.diagram_checks += [
            DiagramCheck(
                Diagrams.SQUARE_PHI,
                eps,
                square_phi,
                later,
                ((nerve, eps), (nerve, later), (rips, ceps), (rips, clater)),
            ),
            DiagramCheck(
                Diagrams.SQUARE_PSI,
                eps,
                square_psi,
                later,
                ((rips, eps), (rips, later), (nerve, ceps), (nerve, clater)),
            ),
        ]

    logger.debug(
        "approximation check k=%d: %d diagrams, %d inclusions, passed=%s",
        k,
        len(report.diagram_checks),
        len(report.inclusion_checks),
        report.all_passed,
    )
    return report
