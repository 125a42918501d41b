"""Shared fixtures: the small closed-form spaces and random space factories."""

from __future__ import annotations

from fractions import Fraction
from typing import Callable

import numpy as np
import pytest

from magnipersist.constants import MetricKinds
from magnipersist.formats.readers import snap_point_cloud
from magnipersist.metric import FiniteMetricSpace, validate_space

# Edge weights used for random spaces before the shortest-path closure
RANDOM_WEIGHTS = (Fraction(1, 2), Fraction(1), Fraction(3, 2), Fraction(2), Fraction(3))


@pytest.fixture
def one_point() -> FiniteMetricSpace:
    return validate_space([[0]])


@pytest.fixture
def two_point() -> FiniteMetricSpace:
    return validate_space([[0, 1], [1, 0]])


@pytest.fixture
def t3() -> FiniteMetricSpace:
    """Collinear a-b-c with unit gaps."""
    return validate_space([[0, 1, 2], [1, 0, 1], [2, 1, 0]], labels=["a", "b", "c"])


@pytest.fixture
def e3() -> FiniteMetricSpace:
    """Equilateral triangle with unit sides."""
    return validate_space([[0, 1, 1], [1, 0, 1], [1, 1, 0]], labels=["a", "b", "c"])


def make_random_space(rng: np.random.Generator, size: int) -> FiniteMetricSpace:
    """
    Symmetric separated metric: random weights closed under shortest paths.
    """
    dist = [[Fraction(0)] * size for _ in range(size)]
    for i in range(size):
        for j in range(i + 1, size):
            w = RANDOM_WEIGHTS[int(rng.integers(len(RANDOM_WEIGHTS)))]
            dist[i][j] = dist[j][i] = w
    for k in range(size):
        for i in range(size):
            for j in range(size):
                if dist[i][k] + dist[k][j] < dist[i][j]:
                    dist[i][j] = dist[i][k] + dist[k][j]
    return validate_space(dist)


def make_grid_space(rng: np.random.Generator, size: int, extent: int = 5) -> FiniteMetricSpace:
    """Distinct points of the integer grid under the L1 metric."""
    cells = rng.choice(extent * extent, size=size, replace=False)
    points = [(Fraction(int(c) // extent), Fraction(int(c) % extent)) for c in cells]
    return snap_point_cloud(points, MetricKinds.L1)


@pytest.fixture
def random_space() -> Callable[[int, int], FiniteMetricSpace]:
    """Factory: random_space(seed, size)."""

    def factory(seed: int, size: int) -> FiniteMetricSpace:
        return make_random_space(np.random.default_rng(seed), size)

    return factory


@pytest.fixture
def grid_space() -> Callable[[int, int], FiniteMetricSpace]:
    """Factory: grid_space(seed, size)."""

    def factory(seed: int, size: int) -> FiniteMetricSpace:
        return make_grid_space(np.random.default_rng(seed), size)

    return factory
