"""
Exact Math - rational scalars and dense univariate polynomials over Q.

Two polynomial types share one implementation:
- HPoly: polynomials in H = d/dx * x, the coefficients of the operator grading
- XPoly: polynomials in x, the module the operators act on

XPoly additionally exposes the divided-power basis x^[s] = x^s/s! as a view.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from numbers import Rational
from typing import ClassVar, Iterable, Sequence, TypeVar

from sympy import Poly, Symbol
from sympy import QQ as SYMPY_QQ
from sympy.ntheory import divisors

from ..errors import DomainError

# Degree of the zero polynomial
NEG_INF = -math.inf

P = TypeVar("P", bound="DensePoly")


# =============================================================================
# Scalars
# =============================================================================

def to_scalar(value: Rational | str | Fraction) -> Fraction:
    """Coerce an int, Fraction or "p/q" string to an exact Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot use {type(value).__name__} as an exact scalar")


def scalar_str(value: Fraction) -> str:
    """Render a scalar as "p" or "p/q"."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def factorial(n: int) -> int:
    return math.factorial(n)


# =============================================================================
# Dense polynomials
# =============================================================================

@dataclass(frozen=True, slots=True)
class DensePoly:
    """
    Dense polynomial with Fraction coefficients, lowest degree first.

    Trailing zeros are stripped on construction, so the zero polynomial is the
    empty tuple and equality is coefficient-wise.
    """

    coeffs: tuple[Fraction, ...] = ()

    VARIABLE: ClassVar[str] = "t"

    def __post_init__(self) -> None:
        values = [to_scalar(c) for c in self.coeffs]
        while values and values[-1] == 0:
            values.pop()
        object.__setattr__(self, "coeffs", tuple(values))

    # --- constructors -------------------------------------------------------

    @classmethod
    def constant(cls: type[P], value: Rational | str) -> P:
        return cls((to_scalar(value),))

    @classmethod
    def monomial(cls: type[P], degree: int, coeff: Rational | str = 1) -> P:
        if degree < 0:
            raise ValueError("monomial degree must be natural")
        return cls((Fraction(0),) * degree + (to_scalar(coeff),))

    @classmethod
    def variable(cls: type[P]) -> P:
        return cls.monomial(1)

    @classmethod
    def zero(cls: type[P]) -> P:
        return cls()

    @classmethod
    def one(cls: type[P]) -> P:
        return cls.constant(1)

    # --- queries ------------------------------------------------------------

    @property
    def degree(self) -> int | float:
        """Degree, or NEG_INF for the zero polynomial."""
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    @property
    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def coeff(self, degree: int) -> Fraction:
        if 0 <= degree < len(self.coeffs):
            return self.coeffs[degree]
        return Fraction(0)

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __len__(self) -> int:
        return len(self.coeffs)

    def __call__(self, value: Rational | str) -> Fraction:
        return poly_eval(self, value)

    # --- arithmetic ---------------------------------------------------------

    def _check_same(self, other: DensePoly) -> None:
        if type(other) is not type(self):
            raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")

    def __add__(self: P, other: P | Rational) -> P:
        if isinstance(other, (int, Rational)):
            other = type(self).constant(other)
        if not isinstance(other, DensePoly):
            return NotImplemented
        self._check_same(other)
        size = max(len(self.coeffs), len(other.coeffs))
        return type(self)(tuple(self.coeff(i) + other.coeff(i) for i in range(size)))

    __radd__ = __add__

    def __neg__(self: P) -> P:
        return type(self)(tuple(-c for c in self.coeffs))

    def __sub__(self: P, other: P | Rational) -> P:
        if isinstance(other, (int, Rational)):
            other = type(self).constant(other)
        if not isinstance(other, DensePoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self: P, other: Rational) -> P:
        return (-self) + other

    def __mul__(self: P, other: P | Rational) -> P:
        if isinstance(other, (int, Rational)):
            factor = to_scalar(other)
            return type(self)(tuple(c * factor for c in self.coeffs))
        if not isinstance(other, DensePoly):
            return NotImplemented
        self._check_same(other)
        if self.is_zero or other.is_zero:
            return type(self)()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return type(self)(tuple(out))

    __rmul__ = __mul__

    def __pow__(self: P, exponent: int) -> P:
        if exponent < 0:
            raise ValueError("polynomial exponent must be natural")
        result = type(self).one()
        for _ in range(exponent):
            result = result * self
        return result

    def __divmod__(self: P, other: P) -> tuple[P, P]:
        return poly_divmod(self, other)

    def shift(self: P, k: int) -> P:
        return poly_shift(self, k)

    def derivative(self: P) -> P:
        return type(self)(tuple(i * c for i, c in enumerate(self.coeffs) if i > 0))

    def monic(self: P) -> P:
        if self.is_zero:
            return self
        return self * (1 / self.leading)

    # --- rendering ----------------------------------------------------------

    def __str__(self) -> str:
        return self.render()

    def render(self) -> str:
        """Grammar-compatible text, highest degree first, e.g. "H^2 - 3*H + 9/4"."""
        terms = [
            _grammar_term(c, i, self.VARIABLE)
            for i, c in reversed(list(enumerate(self.coeffs)))
            if c != 0
        ]
        return join_signed_terms(terms)


class HPoly(DensePoly):
    """Polynomial in H."""

    __slots__ = ()
    VARIABLE: ClassVar[str] = "H"


class XPoly(DensePoly):
    """Polynomial in x, the space the operators act on."""

    __slots__ = ()
    VARIABLE: ClassVar[str] = "x"

    def to_divided(self) -> list[Fraction]:
        """Coordinates in the divided basis: coefficient of x^[s] is s! * c_s."""
        return [c * factorial(s) for s, c in enumerate(self.coeffs)]

    @classmethod
    def from_divided(cls, coords: Sequence[Fraction]) -> XPoly:
        return cls(tuple(to_scalar(c) / factorial(s) for s, c in enumerate(coords)))

    @classmethod
    def divided_monomial(cls, s: int) -> XPoly:
        """x^[s] = x^s / s!."""
        return cls.monomial(s, Fraction(1, factorial(s)))


def _grammar_term(c: Fraction, degree: int, var: str) -> str:
    if degree == 0:
        return scalar_str(c)
    mono = var if degree == 1 else f"{var}^{degree}"
    if c == 1:
        return mono
    if c == -1:
        return f"-{mono}"
    return f"{scalar_str(c)}*{mono}"


def join_signed_terms(terms: Iterable[str]) -> str:
    """Join rendered terms with " + " / " - ", folding leading minus signs."""
    out = ""
    for term in terms:
        if not out:
            out = term
        elif term.startswith("-"):
            out += f" - {term[1:]}"
        else:
            out += f" + {term}"
    return out or "0"


# =============================================================================
# Operations
# =============================================================================

def poly_eval(p: DensePoly, value: Rational | str) -> Fraction:
    """Horner evaluation p(v)."""
    v = to_scalar(value)
    result = Fraction(0)
    for c in reversed(p.coeffs):
        result = result * v + c
    return result


def poly_shift(p: P, k: int) -> P:
    """tau^k(p)(H) = p(H + k)."""
    if k == 0 or p.is_constant:
        return p
    cls = type(p)
    step = cls((Fraction(k), Fraction(1)))
    result = cls()
    for c in reversed(p.coeffs):
        result = result * step + c
    return result


def poly_divmod(p: P, q: P) -> tuple[P, P]:
    """Long division over Q: p = quotient * q + remainder, deg remainder < deg q."""
    if q.is_zero:
        raise ZeroDivisionError("polynomial division by zero")
    cls = type(p)
    remainder = list(p.coeffs)
    dq = len(q.coeffs) - 1
    if len(remainder) - 1 < dq:
        return cls(), p
    quotient = [Fraction(0)] * (len(remainder) - dq)
    lead = q.leading
    for shift in range(len(remainder) - 1 - dq, -1, -1):
        factor = remainder[shift + dq] / lead
        quotient[shift] = factor
        if factor:
            for i, c in enumerate(q.coeffs):
                remainder[shift + i] -= factor * c
    return cls(tuple(quotient)), cls(tuple(remainder[:dq]))


def exact_quotient(p: P, q: P) -> P | None:
    """p / q when q divides p, otherwise None."""
    quotient, remainder = poly_divmod(p, q)
    return quotient if remainder.is_zero else None


def cauchy_bound(p: DensePoly) -> Fraction:
    """1 + max |a_i / a_n|: every complex root has modulus below this bound."""
    if p.is_zero:
        raise DomainError("infinite root set")
    lead = p.leading
    ratios = [abs(c / lead) for c in p.coeffs[:-1]]
    return 1 + max(ratios, default=Fraction(0))


def _integer_coefficients(coeffs: Sequence[Fraction]) -> list[int]:
    lcm = reduce(math.lcm, (c.denominator for c in coeffs), 1)
    return [int(c * lcm) for c in coeffs]


def integer_roots(p: DensePoly) -> list[int]:
    """
    All integers n with p(n) = 0, ascending.

    Denominators are cleared, the power of the variable is factored out, and
    the divisors of the trailing coefficient are filtered by evaluation.
    """
    if p.is_zero:
        raise DomainError("infinite root set")
    low = next(i for i, c in enumerate(p.coeffs) if c != 0)
    roots = {0} if low > 0 else set()
    trailing = abs(_integer_coefficients(p.coeffs[low:])[0])
    for d in divisors(trailing):
        for candidate in (d, -d):
            if poly_eval(p, candidate) == 0:
                roots.add(candidate)
    return sorted(roots)


# =============================================================================
# Factorization (used by the B1 orbit machinery)
# =============================================================================

H_SYMBOL = Symbol("H")


def to_sympy(p: DensePoly) -> Poly:
    coeffs = [SYMPY_QQ(c.numerator, c.denominator) for c in reversed(p.coeffs)] or [SYMPY_QQ(0)]
    return Poly.from_list(coeffs, H_SYMBOL, domain=SYMPY_QQ)


def from_sympy(poly: Poly, cls: type[P] = HPoly) -> P:
    coeffs = [Fraction(int(c.p), int(c.q)) for c in reversed(poly.all_coeffs())]
    return cls(tuple(coeffs))


def is_irreducible(p: DensePoly) -> bool:
    if p.is_constant:
        return False
    return bool(to_sympy(p).is_irreducible)


def irreducible_factors(p: P) -> list[tuple[P, int]]:
    """Monic irreducible factors over Q with multiplicities, in sympy's order."""
    if p.is_zero:
        raise DomainError("cannot factor the zero polynomial")
    if p.is_constant:
        return []
    _, factors = to_sympy(p).factor_list()
    return [(from_sympy(f, type(p)).monic(), mult) for f, mult in factors]
