"""
Finite Metric Spaces

Exact-rational finite quasi-pseudo-metric spaces, tuple lengths and the
grade-bounded tuple enumerator shared by every other module.

Distances are ``Fraction`` values or the ``INF`` sentinel; no floating point.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Iterator, Sequence, Union

from magnipersist.constants import INF_TOKEN, MetricFlags
from magnipersist.errors import (
    IndexOutOfRange,
    InfiniteDistance,
    NegativeEntry,
    NonPositiveScale,
    NonSquare,
    NotSeparated,
    NotSymmetric,
    RequiredFlagViolated,
    ValidationError,
)

logger = logging.getLogger(__name__)


class _Infinity:
    """
    Infinity sentinel for extended rationals.

    Absorbs addition and dominates every finite value in comparisons.
    """

    _instance: "_Infinity | None" = None

    def __new__(cls) -> "_Infinity":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __add__(self, other: object) -> "_Infinity":
        return self

    __radd__ = __add__

    def __mul__(self, other: object) -> "_Infinity":
        return self

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        return other is self

    def __hash__(self) -> int:
        return hash(INF_TOKEN)

    def __lt__(self, other: object) -> bool:
        return False

    def __le__(self, other: object) -> bool:
        return other is self

    def __gt__(self, other: object) -> bool:
        return other is not self

    def __ge__(self, other: object) -> bool:
        return True

    def __repr__(self) -> str:
        return INF_TOKEN

    __str__ = __repr__


INF = _Infinity()

Distance = Union[Fraction, _Infinity]


def to_distance(value: object) -> Distance:
    """
    Coerce an entry to an extended rational.

    Args:
        value: int, Fraction, INF or the string "inf"

    Returns:
        Fraction or INF
    """
    if value is INF or value == INF_TOKEN:
        return INF
    if isinstance(value, bool) or not isinstance(value, Rational):
        raise ValidationError(f"entry {value!r} is not an exact rational")
    return Fraction(value)


@dataclass(frozen=True)
class SpaceFlags:
    """Structural flags of a distance matrix."""

    symmetric: bool
    zero_diagonal: bool
    separated: bool
    finite_distances: bool
    triangle_ok: bool

    def holds(self, flag: str) -> bool:
        return bool(getattr(self, flag))

    def as_dict(self) -> dict[str, bool]:
        return {flag: self.holds(flag) for flag in MetricFlags.ALL}


@dataclass(frozen=True)
class FiniteMetricSpace:
    """
    Immutable finite quasi-pseudo-metric space.

    ``dist[i][j]`` is d(x_i, x_j). ``warnings`` carries provenance notes (e.g.
    Euclidean snapping) and does not take part in equality.
    """

    point_labels: tuple[str, ...]
    dist: tuple[tuple[Distance, ...], ...]
    flags: SpaceFlags
    warnings: tuple[str, ...] = field(default=(), compare=False)

    @property
    def size(self) -> int:
        return len(self.dist)

    def d(self, i: int, j: int) -> Distance:
        return self.dist[i][j]

    def require(self, *flags: str) -> None:
        """
        Check that downstream preconditions hold.

        Raises the dedicated error for separation, symmetry and finiteness,
        RequiredFlagViolated otherwise.
        """
        for flag in flags:
            if self.flags.holds(flag):
                continue
            witness = flag_witness(self.dist, flag)
            if flag == MetricFlags.SEPARATED:
                raise NotSeparated(f"points {witness} are at distance 0")
            if flag == MetricFlags.SYMMETRIC:
                raise NotSymmetric(f"d{witness} differs from its transpose")
            if flag == MetricFlags.FINITE_DISTANCES:
                raise InfiniteDistance(f"d{witness} is infinite")
            raise RequiredFlagViolated(flag, witness)


@dataclass(frozen=True, order=True)
class PointTuple:
    """Ordered tuple (x_0, ..., x_n) of point indices with its length (grade)."""

    indices: tuple[int, ...]
    grade: Fraction = field(compare=False)

    @property
    def degree(self) -> int:
        return len(self.indices) - 1

    @property
    def is_nondegenerate(self) -> bool:
        return is_nondegenerate(self.indices)

    def __str__(self) -> str:
        return "(" + ",".join(str(i) for i in self.indices) + ")"


def is_nondegenerate(indices: Sequence[int]) -> bool:
    """True iff no two consecutive entries coincide."""
    return all(a != b for a, b in zip(indices, indices[1:]))


# =============================================================================
# Validation
# =============================================================================


def flag_witness(dist: Sequence[Sequence[Distance]], flag: str) -> tuple[int, ...]:
    """First index pair/triple (lexicographic) violating ``flag``; () if it holds."""
    m = len(dist)
    if flag == MetricFlags.ZERO_DIAGONAL:
        for i in range(m):
            if dist[i][i] != 0:
                return (i, i)
    elif flag == MetricFlags.SYMMETRIC:
        for i in range(m):
            for j in range(i + 1, m):
                if dist[i][j] != dist[j][i]:
                    return (i, j)
    elif flag == MetricFlags.SEPARATED:
        for i in range(m):
            for j in range(m):
                if i != j and dist[i][j] == 0:
                    return (i, j)
    elif flag == MetricFlags.FINITE_DISTANCES:
        for i in range(m):
            for j in range(m):
                if dist[i][j] is INF:
                    return (i, j)
    elif flag == MetricFlags.TRIANGLE_OK:
        for i in range(m):
            for j in range(m):
                for k in range(m):
                    if dist[i][j] + dist[j][k] < dist[i][k]:
                        return (i, j, k)
    return ()


def compute_flags(dist: Sequence[Sequence[Distance]]) -> SpaceFlags:
    values = {flag: flag_witness(dist, flag) == () for flag in MetricFlags.ALL}
    return SpaceFlags(**values)


def validate_space(
    matrix: Sequence[Sequence[object]],
    require: Iterable[str] = MetricFlags.DEFAULT_REQUIRED,
    labels: Sequence[str] | None = None,
) -> FiniteMetricSpace:
    """
    Build a FiniteMetricSpace from a square matrix of extended rationals.

    Args:
        matrix: Square matrix; entries int, Fraction, INF or "inf"
        require: Flags that must hold
        labels: Optional point labels (defaults to x0, x1, ...)

    Returns:
        Validated space with every flag computed

    Raises:
        NonSquare, NegativeEntry, RequiredFlagViolated
    """
    m = len(matrix)
    for i, row in enumerate(matrix):
        if len(row) != m:
            raise NonSquare(f"row {i} has {len(row)} entries, expected {m}")

    dist = tuple(tuple(to_distance(entry) for entry in row) for row in matrix)
    for i in range(m):
        for j in range(m):
            if dist[i][j] is not INF and dist[i][j] < 0:
                raise NegativeEntry(i, j, dist[i][j])

    if labels is None:
        labels = [f"x{i}" for i in range(m)]
    elif len(labels) != m:
        raise ValidationError(f"{len(labels)} labels for {m} points")

    flags = compute_flags(dist)
    for flag in sorted(require):
        if not flags.holds(flag):
            raise RequiredFlagViolated(flag, flag_witness(dist, flag))

    logger.debug("validated %d-point space: %s", m, flags.as_dict())
    return FiniteMetricSpace(tuple(labels), dist, flags)


# =============================================================================
# Primitives
# =============================================================================


def tuple_length(space: FiniteMetricSpace, t: Sequence[int]) -> Distance:
    """
    Length of an ordered tuple: sum of consecutive distances.

    A single-entry tuple has length 0.
    """
    if not t:
        raise IndexOutOfRange("empty tuple")
    for index in t:
        if not 0 <= index < space.size:
            raise IndexOutOfRange(f"index {index} outside 0..{space.size - 1}")
    total: Distance = Fraction(0)
    for a, b in zip(t, t[1:]):
        total = total + space.dist[a][b]
    return total


def make_tuple(space: FiniteMetricSpace, t: Sequence[int]) -> PointTuple:
    grade = tuple_length(space, t)
    if grade is INF:
        raise InfiniteDistance(f"tuple {tuple(t)} has infinite length")
    return PointTuple(tuple(t), grade)


def scale_space(space: FiniteMetricSpace, t: object) -> FiniteMetricSpace:
    """Multiply every finite distance by the positive rational ``t``."""
    factor = to_distance(t)
    if factor is INF or factor <= 0:
        raise NonPositiveScale(f"scale factor {t} must be a positive rational")
    dist = tuple(
        tuple(entry if entry is INF else entry * factor for entry in row) for row in space.dist
    )
    return FiniteMetricSpace(space.point_labels, dist, space.flags, space.warnings)


def permute_space(space: FiniteMetricSpace, perm: Sequence[int]) -> FiniteMetricSpace:
    """
    Relabel points: point i of the result is point perm[i] of ``space``.
    """
    if sorted(perm) != list(range(space.size)):
        raise ValidationError(f"{list(perm)} is not a permutation of 0..{space.size - 1}")
    dist = tuple(tuple(space.dist[a][b] for b in perm) for a in perm)
    labels = tuple(space.point_labels[a] for a in perm)
    return FiniteMetricSpace(labels, dist, space.flags, space.warnings)


def min_positive_distance(space: FiniteMetricSpace) -> Fraction | None:
    """Smallest positive finite distance (delta_min); None if there is none."""
    positive = [
        entry
        for i, row in enumerate(space.dist)
        for j, entry in enumerate(row)
        if i != j and entry is not INF and entry > 0
    ]
    return min(positive) if positive else None


def diameter(space: FiniteMetricSpace) -> Fraction:
    """Largest finite distance (0 for a one-point space)."""
    finite = [entry for row in space.dist for entry in row if entry is not INF]
    return max(finite, default=Fraction(0))


def iter_tuples(
    space: FiniteMetricSpace,
    l_max: Fraction,
    n_max: int | None = None,
    nondegenerate: bool = True,
) -> Iterator[PointTuple]:
    """
    Enumerate tuples of length <= l_max, in lexicographic order.

    Depth-first with length pruning; steps of infinite length are never
    taken. Without a degree bound every step must be positive, so zero steps
    (repeats, or zero distances between distinct points) require ``n_max``.

    Args:
        space: Space to enumerate over
        l_max: Length bound (inclusive)
        n_max: Degree bound (inclusive), or None
        nondegenerate: Skip tuples with a consecutive repeat

    Yields:
        PointTuple values
    """
    if n_max is None:
        if not nondegenerate:
            raise ValidationError("degenerate tuples need a degree bound")
        if not space.flags.separated:
            raise NotSeparated("unbounded tuple enumeration needs a separated space")

    m = space.size
    dist = space.dist

    for start in range(m):
        prefix = [start]
        # one (length, next candidate) frame per prefix entry
        stack: list[tuple[Fraction, int]] = [(Fraction(0), 0)]
        yield PointTuple((start,), Fraction(0))
        while stack:
            length, candidate = stack[-1]
            if n_max is not None and len(prefix) > n_max:
                candidate = m
            last = prefix[-1]
            while candidate < m:
                step = dist[last][candidate]
                if (nondegenerate and candidate == last) or step is INF:
                    candidate += 1
                elif length + step > l_max:
                    candidate += 1
                else:
                    break
            if candidate >= m:
                stack.pop()
                prefix.pop()
                continue
            stack[-1] = (length, candidate + 1)
            prefix.append(candidate)
            stack.append((length + dist[last][candidate], 0))
            yield PointTuple(tuple(prefix), length + dist[last][candidate])


def length_spectrum(space: FiniteMetricSpace, n_max: int, l_max: object) -> list[Fraction]:
    """
    Distinct lengths of nondegenerate tuples of degree <= n_max and length
    <= l_max, ascending. Always contains 0.
    """
    if n_max < 0:
        raise ValidationError(f"n_max must be non-negative, got {n_max}")
    bound = to_distance(l_max)
    if bound is INF:
        raise ValidationError("l_max must be finite")
    grades = {t.grade for t in iter_tuples(space, bound, n_max, nondegenerate=True)}
    grades.add(Fraction(0))
    return sorted(grades)
