"""Tests for the text readers and emitters."""

from fractions import Fraction

import pytest

from magnipersist.constants import MetricFlags, MetricKinds
from magnipersist.errors import (
    DimensionMismatch,
    NegativeEntry,
    ParseError,
    RequiredFlagViolated,
    TriangleBrokenByRounding,
    ValidationError,
)
from magnipersist.formats import (
    emit_barcode,
    emit_euler,
    emit_limits,
    emit_magnitude,
    emit_mh_table,
    format_distance_matrix,
    parse_distance_matrix,
    parse_metric_kind,
    parse_point_cloud,
    parse_rational,
    snap_point_cloud,
)
from magnipersist.homology import euler_check, magnitude_homology
from magnipersist.limits import ordinary_mh_limit
from magnipersist.magnitude import magnitude_rational
from magnipersist.metric import INF
from magnipersist.persistence import blurred_mh


class TestParseDistanceMatrix:
    def test_one_point(self):
        space = parse_distance_matrix("1\n0\n")
        assert space.size == 1

    def test_two_point(self, two_point):
        assert parse_distance_matrix("2\n0 1\n1 0\n") == two_point

    def test_fractions(self):
        space = parse_distance_matrix("2\n0 1/2\n1/2 0\n")
        assert space.d(0, 1) == Fraction(1, 2)

    def test_labels_and_comments(self):
        text = "# labels: a b\n# a comment\n2\n\n0 1\n1 0\n"
        assert parse_distance_matrix(text).point_labels == ("a", "b")

    def test_infinity(self):
        space = parse_distance_matrix("2\n0 inf\ninf 0\n", require={MetricFlags.ZERO_DIAGONAL})
        assert space.d(1, 0) is INF

    def test_bad_token_is_positioned(self):
        with pytest.raises(ParseError) as info:
            parse_distance_matrix("2\n0 1\n1 x\n")
        assert (info.value.line, info.value.col) == (3, 3)
        assert info.value.one_line().startswith("error[parse]: line 3, col 3")

    def test_zero_denominator(self):
        with pytest.raises(ParseError):
            parse_distance_matrix("2\n0 1/0\n1 0\n")

    def test_bad_count(self):
        with pytest.raises(ParseError) as info:
            parse_distance_matrix("two\n0 1\n1 0\n")
        assert info.value.line == 1

    def test_missing_row(self):
        with pytest.raises(ParseError) as info:
            parse_distance_matrix("3\n0 1 1\n1 0 1\n")
        assert info.value.line == 4

    def test_short_row(self):
        with pytest.raises(ParseError) as info:
            parse_distance_matrix("2\n0 1\n1\n")
        assert info.value.line == 3

    def test_negative_entry(self):
        with pytest.raises(NegativeEntry):
            parse_distance_matrix("2\n0 -1\n-1 0\n")

    def test_validation_applies(self):
        with pytest.raises(RequiredFlagViolated):
            parse_distance_matrix("3\n0 1 3\n1 0 1\n3 1 0\n")

    def test_round_trip(self, t3, random_space):
        for space in (t3, random_space(1, 5)):
            assert parse_distance_matrix(format_distance_matrix(space)) == space


class TestPointClouds:
    def test_parse(self):
        points = parse_point_cloud("# header\n0 0\n1/2 1\n")
        assert points == [(0, 0), (Fraction(1, 2), 1)]

    def test_parse_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            parse_point_cloud("0 0\n1\n")

    def test_l1_collinear(self, t3):
        space = snap_point_cloud([(0, 0), (1, 0), (2, 0)], MetricKinds.L1)
        assert space.dist == t3.dist

    def test_linf_equilateral(self, e3):
        space = snap_point_cloud([(0, 0), (1, 0), (0, 1)], MetricKinds.LINF)
        assert space.dist == e3.dist

    def test_single_point(self):
        assert snap_point_cloud([(3, 4)], MetricKinds.L1).size == 1

    def test_euclid_snapping_warns(self):
        space = snap_point_cloud([(0, 0), (3, 4), (1, 1)], MetricKinds.EUCLID_SNAPPED, 2)
        assert space.d(0, 1) == 5
        # sqrt(2) = 1.414... -> 3/2
        assert space.d(0, 2) == Fraction(3, 2)
        assert space.warnings and "1/2" in space.warnings[0]

    def test_euclid_rounding_half_up(self):
        # sqrt(1/4) = 1/2 -> exactly halfway between 0 and 1
        space = snap_point_cloud([(0,), (Fraction(1, 2),)], MetricKinds.EUCLID_SNAPPED, 1)
        assert space.d(0, 1) == 1

    def test_euclid_breaks_triangle(self):
        # 0.4 + 0.4 rounds to 0 + 0 while 0.8 rounds to 1
        points = [(0,), (Fraction(2, 5),), (Fraction(4, 5),)]
        with pytest.raises(TriangleBrokenByRounding):
            snap_point_cloud(points, MetricKinds.EUCLID_SNAPPED, 1)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            snap_point_cloud([(0, 0), (1,)], MetricKinds.L1)

    def test_metric_kinds(self):
        assert parse_metric_kind("l1") == (MetricKinds.L1, None)
        assert parse_metric_kind("euclid:8") == (MetricKinds.EUCLID_SNAPPED, 8)
        for bad in ("l2", "euclid", "euclid:0", "linf:3"):
            with pytest.raises(ValidationError):
                parse_metric_kind(bad)

    def test_parse_rational(self):
        assert parse_rational(" -3/6 ") == Fraction(-1, 2)
        with pytest.raises(ValueError):
            parse_rational("1.5")


class TestEmitters:
    def test_magnitude(self, two_point):
        assert emit_magnitude(magnitude_rational(two_point)) == "(2)/(1 + 1*u^1) in q^(1/1)\n"

    def test_mh_table(self, two_point):
        lines = emit_mh_table(magnitude_homology(two_point, 1, 1)).splitlines()
        assert lines[0] == "n\tl\trank\ttorsion"
        assert "1\t1\t2\t" in lines

    def test_euler(self, e3):
        lines = emit_euler(euler_check(e3, 3, 2)).splitlines()
        assert lines == [
            "l\tchi\tseries_coeff\texpansion_coeff\tok",
            "0\t3\t3\t3\ttrue",
            "1\t-6\t-6\t-6\ttrue",
            "2\t12\t12\t12\ttrue",
        ]

    def test_barcode(self, two_point):
        text = emit_barcode(blurred_mh(two_point, 2, 2))
        assert text.splitlines() == [
            "k\tbirth\tdeath",
            "0\t0\t1",
            "0\t0\tinf",
            "1\t1\t2",
            "2\t2\tinf",
            "# incomplete degree: 2",
        ]

    def test_limits(self, one_point):
        text = emit_limits(0, 1, 1, ordinary_mh_limit(one_point, 0), None)
        assert text == "k\tnerve\trips\tordinary\tdelta_min\n0\t1\t1\t0\t-\n"
