"""
Filtered complexes and their persistence:
- Enriched nerve and Vietoris-Rips builders
- Column reduction over F_p
- Blurred magnitude homology with a level-wise chain complex cross-check
"""

from .complex import (
    Cell,
    FilteredComplex,
    build_enriched_nerve,
    build_vietoris_rips,
    critical_values,
    format_complex,
)
from .reduction import Bar, Barcode, euler_curve_consistent, reduce_persistence
from .blurred import CoendComplex, blurred_mh, coend_complex_at, compare_with_coend

__all__ = [
    "Cell",
    "FilteredComplex",
    "build_enriched_nerve",
    "build_vietoris_rips",
    "critical_values",
    "format_complex",
    "Bar",
    "Barcode",
    "euler_curve_consistent",
    "reduce_persistence",
    "CoendComplex",
    "blurred_mh",
    "coend_complex_at",
    "compare_with_coend",
]
