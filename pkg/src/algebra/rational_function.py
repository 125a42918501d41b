"""
Rational functions in q with rational exponents.

A value is a ratio of integer polynomials in the formal variable
u = q^(1/N). Exponents of q are cleared by the integer N instead of working
in a monoid ring with rational exponents.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Mapping

import mpmath
from sympy import Poly, Symbol
from sympy.polys.domains import ZZ

from magnipersist.errors import ComputationError, DenominatorConstantTermZero

U = Symbol("u")


def poly_from_terms(terms: Mapping[int, int]) -> Poly:
    """Build an integer polynomial in u from {exponent: coefficient}."""
    cleaned = {(e,): int(c) for e, c in terms.items() if c}
    if not cleaned:
        return Poly(0, U, domain=ZZ)
    return Poly.from_dict(cleaned, U, domain=ZZ)


def poly_terms(p: Poly) -> list[tuple[int, int]]:
    """Nonzero (exponent, coefficient) pairs, ascending exponent."""
    return sorted((monom[0], int(coeff)) for monom, coeff in p.terms() if coeff)


def format_poly(p: Poly) -> str:
    """
    Sparse ascending term list, e.g. ``3 - 1*u^1``.

    The constant term is printed bare; every other term as ``c*u^e``.
    """
    parts: list[str] = []
    for exponent, coeff in poly_terms(p):
        body = str(abs(coeff)) if exponent == 0 else f"{abs(coeff)}*u^{exponent}"
        if not parts:
            parts.append(body if coeff > 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if coeff > 0 else f"- {body}")
    return " ".join(parts) if parts else "0"


def _substitute_power(p: Poly, k: int) -> Poly:
    """p(u) -> p(u^k)."""
    return poly_from_terms({e * k: c for e, c in poly_terms(p)})


@dataclass(frozen=True, eq=False)
class RationalFunctionQ:
    """
    Reduced ratio numerator/denominator of integer polynomials in u = q^(1/N).

    Canonical form: coprime, denominator with positive leading coefficient.
    Use ``from_polys`` to construct.
    """

    numerator: Poly
    denominator: Poly
    exponent_denominator: int

    @classmethod
    def from_polys(cls, numerator: Poly, denominator: Poly, n: int = 1) -> "RationalFunctionQ":
        if denominator.is_zero:
            raise ComputationError("zero denominator")
        if numerator.is_zero:
            return cls(poly_from_terms({}), poly_from_terms({0: 1}), n)
        g = numerator.gcd(denominator)
        num = numerator.exquo(g)
        den = denominator.exquo(g)
        if den.LC() < 0:
            num, den = -num, -den
        return cls(num, den, n)

    @classmethod
    def constant(cls, value: int) -> "RationalFunctionQ":
        return cls.from_polys(poly_from_terms({0: value}), poly_from_terms({0: 1}))

    def rescaled(self, n: int) -> "RationalFunctionQ":
        """Re-express over u' = q^(1/n); ``n`` must be a multiple of N."""
        if n % self.exponent_denominator:
            raise ValueError(f"{n} is not a multiple of {self.exponent_denominator}")
        k = n // self.exponent_denominator
        return RationalFunctionQ(
            _substitute_power(self.numerator, k), _substitute_power(self.denominator, k), n
        )

    def scale_exponents(self, t: Fraction) -> "RationalFunctionQ":
        """Substitute q -> q^t for a positive rational t."""
        t = Fraction(t)
        if t <= 0:
            raise ValueError("exponent scale must be positive")
        return RationalFunctionQ.from_polys(
            _substitute_power(self.numerator, t.numerator),
            _substitute_power(self.denominator, t.numerator),
            self.exponent_denominator * t.denominator,
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RationalFunctionQ):
            return NotImplemented
        n = lcm(self.exponent_denominator, other.exponent_denominator)
        a, b = self.rescaled(n), other.rescaled(n)
        return a.numerator * b.denominator == b.numerator * a.denominator

    __hash__ = None  # type: ignore[assignment]

    def evaluate_at_t(self, t: Fraction) -> tuple[mpmath.mpf, mpmath.mpf]:
        """
        Numerator and denominator at q = e^(-t), in the current mpmath context.
        """
        t = Fraction(t)
        u = mpmath.exp(-mpmath.mpf(t.numerator) / (t.denominator * self.exponent_denominator))
        num = mpmath.polyval([int(c) for c in self.numerator.all_coeffs()], u)
        den = mpmath.polyval([int(c) for c in self.denominator.all_coeffs()], u)
        return num, den

    def series_coefficients(self, max_exponent: int) -> list[Fraction]:
        """
        Power series of numerator/denominator in u up to u^max_exponent.

        Long division with ascending-order quotient.

        Raises:
            DenominatorConstantTermZero: expansion at q = 0 impossible
        """
        den = dict(poly_terms(self.denominator))
        d0 = den.get(0, 0)
        if d0 == 0:
            raise DenominatorConstantTermZero(f"denominator {format_poly(self.denominator)}")
        remainder = dict(poly_terms(self.numerator))
        coeffs: list[Fraction] = []
        for e in range(max_exponent + 1):
            c = Fraction(remainder.get(e, 0), d0)
            coeffs.append(c)
            if c:
                for de, dc in den.items():
                    if e + de <= max_exponent:
                        remainder[e + de] = remainder.get(e + de, 0) - c * dc
        return coeffs

    def to_text(self) -> str:
        """Serialize as ``(<num>)/(<den>) in q^(1/N)``."""
        return (
            f"({format_poly(self.numerator)})/({format_poly(self.denominator)})"
            f" in q^(1/{self.exponent_denominator})"
        )

    def __str__(self) -> str:
        return self.to_text()
