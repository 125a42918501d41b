"""
Persistence over a prime field.

Standard column reduction of the filtered boundary matrix, columns kept as
sparse {row: coefficient mod p} dictionaries.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction

from magnipersist.algebra.finite_field import require_prime
from magnipersist.errors import UnsortedComplex
from magnipersist.metric import INF, Distance
from magnipersist.persistence.complex import FilteredComplex, critical_values

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Bar:
    k: int
    birth: Fraction
    death: Distance

    def alive_at(self, eps: Fraction) -> bool:
        return self.birth <= eps and (self.death is INF or eps < self.death)

    def __str__(self) -> str:
        return f"H{self.k} [{self.birth}, {self.death})"


def _bar_order(bar: Bar) -> tuple[int, Fraction, int, Fraction]:
    infinite = bar.death is INF
    return (bar.k, bar.birth, int(infinite), Fraction(0) if infinite else bar.death)


@dataclass(frozen=True)
class Barcode:
    """
    Multiset of bars in degree, birth, death order.

    ``incomplete_degrees`` lists degrees whose bars may be truncation
    artifacts of ``dim_max`` or ``eps_max``.
    """

    bars: tuple[Bar, ...]
    characteristic: int
    eps_max: Fraction
    incomplete_degrees: tuple[int, ...] = ()

    def in_degree(self, k: int) -> list[Bar]:
        return [bar for bar in self.bars if bar.k == k]

    def betti_at(self, k: int, eps: Fraction) -> int:
        """Number of degree-k bars with birth <= eps < death."""
        return sum(1 for bar in self.bars if bar.k == k and bar.alive_at(eps))

    @property
    def degrees(self) -> list[int]:
        return sorted({bar.k for bar in self.bars})

    def intervals(self, k: int) -> list[tuple[Fraction, Distance]]:
        return [(bar.birth, bar.death) for bar in self.in_degree(k)]


def _check_sorted(complex: FilteredComplex) -> None:
    previous = None
    for position, cell in enumerate(complex.cells):
        if cell.id != position:
            raise UnsortedComplex(f"cell at position {position} has id {cell.id}")
        if previous is not None and cell.sort_key < previous:
            raise UnsortedComplex(f"cell {cell.id} precedes its predecessor in filtration order")
        previous = cell.sort_key
        for face_id, _ in cell.boundary:
            face = complex.cells[face_id] if face_id < position else None
            if face is None or face.dim != cell.dim - 1 or face.filtration > cell.filtration:
                raise UnsortedComplex(f"face {face_id} of cell {cell.id} is out of order")


def reduce_persistence(complex: FilteredComplex, p: int = 2) -> Barcode:
    """
    Barcode of the sublevel filtration of ``complex`` with F_p coefficients.

    Zero-length bars are not stored. Degrees >= dim_max are flagged
    incomplete, as are positive degrees with a bar still alive at eps_max.

    Raises:
        NonPrimeCharacteristic, UnsortedComplex
    """
    require_prime(p)
    _check_sorted(complex)
    cells = complex.cells

    reduced: list[dict[int, int]] = []
    pivot_column: dict[int, int] = {}
    bars: list[Bar] = []
    additions = 0

    for j, cell in enumerate(cells):
        column = {fid: sign % p for fid, sign in cell.boundary if sign % p}
        while column:
            low = max(column)
            other = pivot_column.get(low)
            if other is None:
                break
            pivot = reduced[other]
            factor = column[low] * pow(pivot[low], -1, p) % p
            for row, value in pivot.items():
                updated = (column.get(row, 0) - factor * value) % p
                if updated:
                    column[row] = updated
                else:
                    column.pop(row, None)
            additions += 1
        reduced.append(column)
        if column:
            low = max(column)
            pivot_column[low] = j
            birth = cells[low].filtration
            if birth != cell.filtration:
                bars.append(Bar(cells[low].dim, birth, cell.filtration))

    for j, cell in enumerate(cells):
        if not reduced[j] and j not in pivot_column:
            bars.append(Bar(cell.dim, cell.filtration, INF))

    bars.sort(key=_bar_order)
    incomplete = {complex.dim_max}
    incomplete.update(bar.k for bar in bars if bar.k >= 1 and bar.death is INF)
    logger.debug(
        "reduced %d cells over F_%d: %d bars, %d column additions",
        len(cells),
        p,
        len(bars),
        additions,
    )
    return Barcode(tuple(bars), p, complex.eps_max, tuple(sorted(incomplete)))


def euler_curve_consistent(complex: FilteredComplex, barcode: Barcode) -> bool:
    """
    Alternating cell count equals alternating Betti sum at every critical value.
    """
    degrees = range(complex.dim_max + 1)
    for eps in critical_values(complex):
        cells_chi = sum((-1) ** cell.dim for cell in complex.sublevel(eps))
        betti_chi = sum((-1) ** k * barcode.betti_at(k, eps) for k in degrees)
        if cells_chi != betti_chi:
            logger.warning("euler curve mismatch at eps=%s: %d vs %d", eps, cells_chi, betti_chi)
            return False
    return True
