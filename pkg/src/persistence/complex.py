"""
Filtered Complexes

Builders for the enriched nerve (ordered nondegenerate tuples filtered by
length) and the Vietoris-Rips complex (increasing vertex sets filtered by
diameter). Both produce cells sorted by (filtration, dimension, vertices).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Iterator

from magnipersist.constants import MetricFlags, Provenance
from magnipersist.errors import InternalCheckFailed, ResourceBound, ValidationError
from magnipersist.metric import INF, FiniteMetricSpace, is_nondegenerate, iter_tuples, to_distance

logger = logging.getLogger(__name__)

DEFAULT_MAX_CELLS = 200_000


@dataclass(frozen=True)
class Cell:
    """A cell with its signed boundary, given as (cell id, ±1) pairs."""

    id: int
    dim: int
    filtration: Fraction
    vertices: tuple[int, ...]
    boundary: tuple[tuple[int, int], ...]

    @property
    def sort_key(self) -> tuple[Fraction, int, tuple[int, ...]]:
        return (self.filtration, self.dim, self.vertices)


@dataclass(frozen=True)
class FilteredComplex:
    cells: tuple[Cell, ...]
    provenance: str
    dim_max: int
    eps_max: Fraction

    def __len__(self) -> int:
        return len(self.cells)

    def sublevel(self, eps: Fraction) -> list[Cell]:
        """Cells with filtration value <= eps."""
        return [cell for cell in self.cells if cell.filtration <= eps]

    def vertex_tuples(self) -> set[tuple[int, ...]]:
        return {cell.vertices for cell in self.cells}


def _check_bounds(dim_max: int, eps_max: object) -> Fraction:
    if dim_max < 0:
        raise ValidationError(f"dim_max must be non-negative, got {dim_max}")
    eps = to_distance(eps_max)
    if eps is INF:
        raise ValidationError("eps_max must be finite")
    if eps < 0:
        raise ValidationError(f"eps_max must be non-negative, got {eps}")
    return eps


def _assemble(
    raw: Iterable[tuple[tuple[int, ...], Fraction]],
    faces_of: Callable[[tuple[int, ...]], Iterator[tuple[tuple[int, ...], int]]],
    provenance: str,
    dim_max: int,
    eps_max: Fraction,
    max_cells: int,
) -> FilteredComplex:
    """Sort raw (vertices, filtration) cells, assign ids and resolve boundaries."""
    entries = []
    for vertices, filtration in raw:
        entries.append((filtration, len(vertices) - 1, vertices))
        if len(entries) > max_cells:
            raise ResourceBound("cells", len(entries), max_cells)
    entries.sort()
    id_of = {vertices: i for i, (_, _, vertices) in enumerate(entries)}

    cells = []
    for i, (filtration, dim, vertices) in enumerate(entries):
        signs: dict[int, int] = {}
        for face, sign in faces_of(vertices):
            face_id = id_of.get(face)
            if face_id is None:
                raise InternalCheckFailed(f"face {face} of cell {vertices} is missing")
            signs[face_id] = signs.get(face_id, 0) + sign
        boundary = tuple((fid, s) for fid, s in sorted(signs.items()) if s)
        cells.append(Cell(i, dim, filtration, vertices, boundary))

    logger.debug(
        "%s complex: %d cells up to dim %d, eps <= %s", provenance, len(cells), dim_max, eps_max
    )
    return FilteredComplex(tuple(cells), provenance, dim_max, eps_max)


def _nerve_faces(vertices: tuple[int, ...]) -> Iterator[tuple[tuple[int, ...], int]]:
    if len(vertices) == 1:
        return
    for i in range(len(vertices)):
        face = vertices[:i] + vertices[i + 1 :]
        if is_nondegenerate(face):
            yield face, -1 if i % 2 else 1


def build_enriched_nerve(
    space: FiniteMetricSpace,
    dim_max: int,
    eps_max: object,
    max_cells: int = DEFAULT_MAX_CELLS,
) -> FilteredComplex:
    """
    Enriched nerve truncated at ``dim_max`` and ``eps_max``.

    One cell per nondegenerate tuple of degree <= dim_max and length <= eps_max,
    filtered by length, with the ordinary alternating simplicial boundary.
    Faces that become degenerate contribute 0.

    Raises:
        NotSeparated: some pair of distinct points is at distance 0
        RequiredFlagViolated: triangle inequality fails (faces could outgrow cells)
        ResourceBound: more than ``max_cells`` cells
    """
    eps = _check_bounds(dim_max, eps_max)
    space.require(MetricFlags.ZERO_DIAGONAL, MetricFlags.SEPARATED, MetricFlags.TRIANGLE_OK)
    raw = ((t.indices, t.grade) for t in iter_tuples(space, eps, dim_max, nondegenerate=True))
    return _assemble(raw, _nerve_faces, Provenance.NERVE, dim_max, eps, max_cells)


def _rips_faces(vertices: tuple[int, ...]) -> Iterator[tuple[tuple[int, ...], int]]:
    if len(vertices) == 1:
        return
    for i in range(len(vertices)):
        yield vertices[:i] + vertices[i + 1 :], -1 if i % 2 else 1


def _increasing_cliques(
    space: FiniteMetricSpace, dim_max: int, eps: Fraction
) -> Iterator[tuple[tuple[int, ...], Fraction]]:
    m = space.size
    dist = space.dist

    def extend(simplex: list[int], diam: Fraction) -> Iterator[tuple[tuple[int, ...], Fraction]]:
        yield tuple(simplex), diam
        if len(simplex) > dim_max:
            return
        for nxt in range(simplex[-1] + 1, m):
            reach = [dist[v][nxt] for v in simplex]
            if any(d is INF or d > eps for d in reach):
                continue
            simplex.append(nxt)
            yield from extend(simplex, max(diam, *reach))
            simplex.pop()

    for v in range(m):
        yield from extend([v], Fraction(0))


def build_vietoris_rips(
    space: FiniteMetricSpace,
    dim_max: int,
    eps_max: object,
    max_cells: int = DEFAULT_MAX_CELLS,
) -> FilteredComplex:
    """
    Vietoris-Rips complex on strictly increasing vertex tuples.

    Raises:
        NotSymmetric, NotSeparated, ResourceBound
    """
    eps = _check_bounds(dim_max, eps_max)
    space.require(MetricFlags.ZERO_DIAGONAL, MetricFlags.SYMMETRIC, MetricFlags.SEPARATED)
    raw = _increasing_cliques(space, dim_max, eps)
    return _assemble(raw, _rips_faces, Provenance.RIPS, dim_max, eps, max_cells)


def critical_values(complex: FilteredComplex) -> list[Fraction]:
    """Distinct filtration values, ascending."""
    return sorted({cell.filtration for cell in complex.cells})


def format_complex(complex: FilteredComplex) -> str:
    """
    One cell per line: ``id dim filtration boundary_ids signs``.

    Boundary ids and signs are comma-separated; an empty boundary is ``-``.
    """
    lines = []
    for cell in complex.cells:
        ids = ",".join(str(fid) for fid, _ in cell.boundary) or "-"
        signs = ",".join(f"{s:+d}" for _, s in cell.boundary) or "-"
        lines.append(f"{cell.id} {cell.dim} {cell.filtration} {ids} {signs}")
    return "\n".join(lines) + ("\n" if lines else "")
