"""Prime-field helpers: characteristic check and matrix rank over F_p."""

from __future__ import annotations

import numpy as np
from sympy import isprime
from sympy.polys.domains import GF
from sympy.polys.matrices import DomainMatrix

from magnipersist.errors import NonPrimeCharacteristic


def require_prime(p: int) -> int:
    """Return ``p`` if it is prime, raise NonPrimeCharacteristic otherwise."""
    if isinstance(p, bool) or not isinstance(p, int) or not isprime(p):
        raise NonPrimeCharacteristic(f"field characteristic {p!r} is not prime")
    return p


def rank_mod_p(matrix: np.ndarray, p: int) -> int:
    """Rank of an integer matrix reduced modulo the prime ``p``."""
    rows, cols = matrix.shape
    if rows == 0 or cols == 0:
        return 0
    field = GF(p)
    entries = [[field(int(v) % p) for v in row] for row in matrix.tolist()]
    return DomainMatrix(entries, (rows, cols), field).rank()
