"""Tests for small-scale limits and the nerve/Rips approximation check."""

from fractions import Fraction

import pytest

from magnipersist.constants import MetricFlags, Provenance
from magnipersist.errors import NotSeparated, NotSymmetric
from magnipersist.limits import (
    Diagrams,
    c_approximation_check,
    limit_homology,
    ordinary_mh_limit,
    separation_witness,
)
from magnipersist.metric import validate_space


class TestLimitHomology:
    @pytest.mark.parametrize("which", Provenance.ALL)
    def test_degree_zero_counts_points(self, t3, which):
        assert limit_homology(t3, 0, which) == 3

    def test_two_point_cycle_absent(self, two_point):
        assert limit_homology(two_point, 1, Provenance.NERVE) == 0

    def test_one_point(self, one_point):
        assert limit_homology(one_point, 0, Provenance.NERVE, p=3) == 1

    def test_not_separated(self):
        with pytest.raises(NotSeparated):
            limit_homology(validate_space([[0, 0], [0, 0]]), 0, Provenance.RIPS)


class TestOrdinaryLimit:
    def test_two_point_audit(self, two_point):
        limit = ordinary_mh_limit(two_point, 0, l_max=2)
        assert limit.rank == 0
        assert [(a.grade, a.next_grade) for a in limit.audits] == [(0, 1), (1, 2)]
        assert all(a.is_zero for a in limit.audits)

    def test_one_point_is_vacuous(self, one_point):
        limit = ordinary_mh_limit(one_point, 0)
        assert limit.rank == 0
        assert limit.audits == ()

    @pytest.mark.parametrize("k", [0, 1, 2])
    def test_every_degree_is_zero(self, e3, k):
        limit = ordinary_mh_limit(e3, k)
        assert limit.rank == 0
        assert all(a.is_zero for a in limit.audits)


class TestSeparationWitness:
    def test_closed_forms(self, one_point, two_point, t3):
        assert separation_witness(one_point) == (1, 0)
        assert separation_witness(two_point) == (2, 0)
        assert separation_witness(t3) == (3, 0)


class TestApproximation:
    def test_two_point(self, two_point):
        report = c_approximation_check(two_point, 0, sample_eps=[Fraction(1, 2), 1, 2])
        assert report.c == 1
        assert report.sampled_eps == [Fraction(1, 2), 1, 2]
        assert (report.limit_nerve, report.limit_rips) == (2, 2)
        assert report.all_passed
        assert report.isomorphic
        assert report.delta_min == 1
        triangles = [d for d in report.diagram_checks if d.next_eps is None]
        squares = [d for d in report.diagram_checks if d.next_eps is not None]
        assert len(triangles) == 6
        assert {d.diagram for d in squares} == {Diagrams.SQUARE_PHI, Diagrams.SQUARE_PSI}
        assert len(report.inclusion_checks) == 12

    def test_collinear_triangle_enters_nerve(self, t3):
        report = c_approximation_check(t3, 1, sample_eps=[1, 2])
        assert report.c == 2
        assert (report.limit_nerve, report.limit_rips) == (0, 0)
        assert report.all_passed

    def test_diagram_levels(self, t3):
        report = c_approximation_check(t3, 1, sample_eps=[1, 2])
        nerve, rips = Provenance.NERVE, Provenance.RIPS
        levels = {(d.diagram, d.eps): d.levels for d in report.diagram_checks}
        assert levels[(Diagrams.TRIANGLE_PHI, 1)] == ((nerve, 1), (rips, 2), (nerve, 4))
        assert levels[(Diagrams.TRIANGLE_PSI, 1)] == ((rips, 1), (nerve, 2), (rips, 4))
        assert levels[(Diagrams.TRIANGLE_PHI, 2)] == ((nerve, 2), (rips, 4), (nerve, 8))
        assert levels[(Diagrams.SQUARE_PHI, 1)] == ((nerve, 1), (nerve, 2), (rips, 2), (rips, 4))
        assert levels[(Diagrams.SQUARE_PSI, 1)] == ((rips, 1), (rips, 2), (nerve, 2), (nerve, 4))

    def test_triangles_need_squared_scale(self, t3):
        report = c_approximation_check(t3, 1, sample_eps=[Fraction(1, 2)])
        triangles = {d.diagram: d for d in report.diagram_checks}
        assert triangles[Diagrams.TRIANGLE_PSI].levels[-1] == (Provenance.RIPS, 2)
        assert all(d.passed for d in triangles.values())

    def test_one_point_is_vacuous(self, one_point):
        report = c_approximation_check(one_point, 2)
        assert report.diagram_checks == []
        assert report.isomorphic

    def test_not_symmetric(self):
        space = validate_space([[0, 1], [2, 0]], require={MetricFlags.ZERO_DIAGONAL})
        with pytest.raises(NotSymmetric):
            c_approximation_check(space, 0, sample_eps=[1])


@pytest.mark.slow
class TestRandomSpaces:
    def test_limits_agree(self, random_space):
        for seed in range(20):
            space = random_space(500 + seed, 2 + seed % 4)
            m = space.size
            assert separation_witness(space) == (m, 0)
            for which in Provenance.ALL:
                assert limit_homology(space, 0, which) == m
                assert limit_homology(space, 1, which) == 0

    def test_approximation_passes(self, random_space):
        for seed in range(20):
            space = random_space(600 + seed, 2 + seed % 3)
            distances = sorted({d for row in space.dist for d in row if d > 0})
            samples = [distances[0] / 2] + distances
            for k in (0, 1):
                report = c_approximation_check(space, k, sample_eps=samples)
                assert report.all_passed
                assert report.isomorphic
