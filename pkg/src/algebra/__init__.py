"""
Exact algebra used by the topology modules:
- Rational functions in q with rational exponents
- Smith normal form over the integers
- Prime-field rank
"""

from .rational_function import RationalFunctionQ, format_poly, poly_from_terms
from .smith import SmithForm, smith_normal_form
from .finite_field import rank_mod_p, require_prime

__all__ = [
    "RationalFunctionQ",
    "format_poly",
    "poly_from_terms",
    "SmithForm",
    "smith_normal_form",
    "rank_mod_p",
    "require_prime",
]
