"""
B1 quotient - the skew Laurent ring K[H][D, D^-1; tau] = I1 / F.

Elements are stored as sum_k D^k beta_k(H) with the coefficients on the
RIGHT of D^k, so an element of normal-candidate shape reads

    D^-m beta_-m + ... + D^-1 beta_-1 + beta_0.

Commutation: beta(H) D^j = D^j beta(H - j).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from numbers import Rational
from typing import TYPE_CHECKING, Mapping

from ..errors import CertificationError, DomainError
from .exactmath import HPoly, exact_quotient, irreducible_factors, is_irreducible, poly_shift, to_scalar
from .opcore import Operator, is_compact

if TYPE_CHECKING:
    from ..schemas import NormalizationResult

logger = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class B1Element:
    """Right-coefficient form sum_k D^k beta_k(H), sorted by k and zero-free."""

    coeffs: tuple[tuple[int, HPoly], ...] = ()

    def __post_init__(self) -> None:
        merged: dict[int, HPoly] = {}
        for k, p in self.coeffs:
            if not isinstance(p, HPoly):
                raise TypeError("B1 coefficients must be HPoly")
            merged[k] = merged[k] + p if k in merged else p
        cleaned = tuple(sorted((k, p) for k, p in merged.items() if not p.is_zero))
        object.__setattr__(self, "coeffs", cleaned)

    @classmethod
    def build(cls, mapping: Mapping[int, HPoly]) -> B1Element:
        return cls(tuple(mapping.items()))

    @classmethod
    def hpoly(cls, p: HPoly) -> B1Element:
        return cls(((0, p),))

    @classmethod
    def scalar(cls, value: Rational | str) -> B1Element:
        return cls.hpoly(HPoly.constant(value))

    @classmethod
    def d_power(cls, k: int) -> B1Element:
        """D^k for any integer k."""
        return cls(((k, HPoly.one()),))

    def coefficient(self, k: int) -> HPoly:
        return dict(self.coeffs).get(k, HPoly())

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: B1Element) -> B1Element:
        if not isinstance(other, B1Element):
            return NotImplemented
        return b1_add(self, other)

    def __neg__(self) -> B1Element:
        return B1Element(tuple((k, -p) for k, p in self.coeffs))

    def __sub__(self, other: B1Element) -> B1Element:
        if not isinstance(other, B1Element):
            return NotImplemented
        return b1_add(self, -other)

    def __mul__(self, other: B1Element | Rational) -> B1Element:
        if isinstance(other, (int, Rational)):
            c = to_scalar(other)
            return B1Element(tuple((k, p * c) for k, p in self.coeffs))
        if not isinstance(other, B1Element):
            return NotImplemented
        return b1_mul(self, other)

    def __pow__(self, exponent: int) -> B1Element:
        return b1_power(self, exponent)

    def __str__(self) -> str:
        from .lang import format_b1

        return format_b1(self)


B1_ONE = B1Element.scalar(1)


# =============================================================================
# Projection and arithmetic
# =============================================================================

def project(a: Operator) -> B1Element:
    """a + F: drops the finite part, b(H) v_k becomes D^-k tau^k(b)."""
    return B1Element(tuple((-k, poly_shift(b, k)) for k, b in a.graded))


def b1_add(u: B1Element, v: B1Element) -> B1Element:
    return B1Element(u.coeffs + v.coeffs)


def b1_mul(u: B1Element, v: B1Element) -> B1Element:
    """(D^i beta)(D^j gamma) = D^(i+j) tau^-j(beta) gamma."""
    terms = [
        (i + j, poly_shift(beta, -j) * gamma)
        for i, beta in u.coeffs
        for j, gamma in v.coeffs
    ]
    return B1Element(tuple(terms))


def b1_power(u: B1Element, exponent: int) -> B1Element:
    if exponent < 0:
        if len(u.coeffs) != 1 or not u.coeffs[0][1].is_constant:
            raise DomainError("only monomials c*D^k are invertible in B1")
        (k, c), = u.coeffs
        u = B1Element(((-k, HPoly.constant(1 / c.leading)),))
        exponent = -exponent
    result = B1_ONE
    for _ in range(exponent):
        result = b1_mul(result, u)
    return result


def b1_support_bounds(b: B1Element) -> tuple[int, int]:
    """(min degree, max degree) of the support."""
    if b.is_zero:
        raise DomainError("no graded part")
    return b.coeffs[0][0], b.coeffs[-1][0]


def deg_inv_d(b: B1Element) -> int:
    """Degree in D^-1, i.e. minus the lowest D-degree."""
    return -b1_support_bounds(b)[0]


def index_via_b1(a: Operator) -> int:
    """ind(a) = -deg_{D^-1}(a + F)."""
    if is_compact(a):
        raise DomainError("index undefined for compact operators")
    return -deg_inv_d(project(a))


# =============================================================================
# Orbits of maximal ideals of K[H] under tau
# =============================================================================

def orbit_shift(f: HPoly, g: HPoly) -> int | None:
    """
    The integer i with g(H) = f(H + i), or None when f and g lie in
    different tau-orbits. Both inputs must be irreducible; they are compared
    up to a scalar factor.
    """
    if not (is_irreducible(f) and is_irreducible(g)):
        raise DomainError("orbit comparison requires irreducible polynomials")
    f, g = f.monic(), g.monic()
    n = f.degree
    if n != g.degree:
        return None
    # tau^i(f) has subleading coefficient f_{n-1} + n*i
    i = (g.coeff(n - 1) - f.coeff(n - 1)) / n
    if i.denominator != 1:
        return None
    i = int(i)
    return i if poly_shift(f, i) == g else None


def poly_less(alpha: HPoly, beta: HPoly) -> bool:
    """
    alpha < beta: every pair of orbit-comparable irreducible factors f | alpha,
    g | beta with g(H) = f(H + i) has i > 0. True when no pair is comparable.
    """
    if alpha.is_zero or beta.is_zero:
        raise DomainError("comparison requires nonzero polynomials")
    for f, _ in irreducible_factors(alpha):
        for g, _ in irreducible_factors(beta):
            i = orbit_shift(f, g)
            if i is not None and i <= 0:
                return False
    return True


def _candidate_shape(b: B1Element) -> tuple[int, HPoly, HPoly]:
    """(m, beta_0, beta_-m) for b = D^-m beta_-m + ... + beta_0 with m > 0."""
    if b.is_zero:
        raise DomainError("not of normal-candidate shape")
    low, high = b1_support_bounds(b)
    if high != 0 or low >= 0:
        raise DomainError("not of normal-candidate shape")
    return -low, b.coefficient(0), b.coefficient(low)


def is_normal(b: B1Element) -> bool:
    _, beta0, beta_m = _candidate_shape(b)
    return poly_less(beta0, beta_m)


# =============================================================================
# Normalization b -> beta * b * alpha^-1
# =============================================================================

def _orbit_gap(beta0: HPoly, beta_m: HPoly) -> int:
    gaps = [0]
    for f, _ in irreducible_factors(beta0):
        for g, _ in irreducible_factors(beta0 * beta_m):
            i = orbit_shift(f, g)
            if i is not None:
                gaps.append(abs(i))
    return max(gaps)


def _shift_product(p: HPoly, start: int, stop: int) -> HPoly:
    """prod_{start <= j <= stop} tau^j(p)."""
    result = HPoly.one()
    for j in range(start, stop + 1):
        result = result * poly_shift(p, j)
    return result


def _conjugate(b: B1Element, alpha: HPoly, beta: HPoly) -> B1Element | None:
    """beta * b * alpha^-1 when every coefficient of beta * b is right-divisible by alpha."""
    product = b1_mul(B1Element.hpoly(beta), b)
    quotients = {}
    for k, gamma in product.coeffs:
        q = exact_quotient(gamma, alpha)
        if q is None:
            return None
        quotients[k] = q
    return B1Element.build(quotients)


def normalize(b: B1Element) -> NormalizationResult:
    """
    Find (alpha, beta, b') with b' = beta * b * alpha^-1 normal.

    Candidates are alpha = prod_{-s<=i<=0} tau^i(beta_0) and
    beta = prod_{-m-s<=j<=-1} tau^j(beta_0) for s = 0, 1, ...; the first
    certified s is returned. Returns a NormalizationResult.
    """
    from ..schemas import NormalizationResult

    m, beta0, beta_m = _candidate_shape(b)
    if poly_less(beta0, beta_m):
        return NormalizationResult(alpha=HPoly.one(), beta=HPoly.one(), normal=b)

    cap = _orbit_gap(beta0, beta_m) + m + 2
    for s in range(cap + 1):
        alpha = _shift_product(beta0, -s, 0)
        beta = _shift_product(beta0, -m - s, -1)
        candidate = _conjugate(b, alpha, beta)
        logger.debug("normalize: s=%d candidate=%s", s, candidate)
        if candidate is None or not is_normal(candidate):
            continue
        if b1_mul(B1Element.hpoly(beta), b) != b1_mul(candidate, B1Element.hpoly(alpha)):
            raise CertificationError("normalization failed its clearing check")
        return NormalizationResult(alpha=alpha, beta=beta, normal=candidate)

    raise CertificationError(f"normalization did not certify within s <= {cap}")
