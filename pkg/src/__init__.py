"""
MagniPersist

Exact magnitude, magnitude homology and persistence of finite metric spaces:
- Magnitude as a rational function of q and the magnitude function
- Magnitude homology over Z and the Euler characteristic check
- Blurred magnitude homology (enriched nerve) and Vietoris-Rips barcodes
- Small-scale limits and the nerve/Rips approximation check
"""

from .metric import FiniteMetricSpace, validate_space
from .magnitude import magnitude_function_eval, magnitude_rational, magnitude_series
from .homology import euler_check, magnitude_homology
from .persistence import blurred_mh, build_enriched_nerve, build_vietoris_rips, reduce_persistence
from .limits import c_approximation_check, limit_homology, ordinary_mh_limit

__all__ = [
    "FiniteMetricSpace",
    "validate_space",
    "magnitude_function_eval",
    "magnitude_rational",
    "magnitude_series",
    "euler_check",
    "magnitude_homology",
    "blurred_mh",
    "build_enriched_nerve",
    "build_vietoris_rips",
    "reduce_persistence",
    "c_approximation_check",
    "limit_homology",
    "ordinary_mh_limit",
]
