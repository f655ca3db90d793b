"""
Operator Core - canonical forms in the algebra of integro-differential operators.

Every element is stored as its unique canonical form

    sum_k b_k(H) v_k  +  sum_{i,j} c_ij e_ij

where v_k is I^k for k > 0, 1 for k = 0 and D^|k| for k < 0, the polynomial
coefficients b_k sit on the LEFT, and e_ij are the matrix units acting by
e_ij x^[s] = delta_js x^[i] on the divided basis. Equality of canonical forms
is coefficient-wise, so the dataclasses below compare directly.

Multiplication is table driven (see mul). The rule used for e_ij * D is
e_ij D = e_{i,j+1}, which is the one consistent with the action on K[x].
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping

from ..errors import DomainError
from .exactmath import HPoly, factorial, poly_shift, to_scalar

FKey = tuple[int, int]


# =============================================================================
# Finite part (the ideal F of compact operators)
# =============================================================================

@dataclass(frozen=True, slots=True)
class FPart:
    """Sparse matrix of coefficients over the units e_ij, sorted and zero-free."""

    entries: tuple[tuple[FKey, Fraction], ...] = ()

    def __post_init__(self) -> None:
        merged: dict[FKey, Fraction] = defaultdict(Fraction)
        for (i, j), c in self.entries:
            if i < 0 or j < 0:
                raise ValueError(f"matrix unit indices must be natural, got e[{i},{j}]")
            merged[(i, j)] += to_scalar(c)
        cleaned = tuple(sorted((k, c) for k, c in merged.items() if c != 0))
        object.__setattr__(self, "entries", cleaned)

    @classmethod
    def from_mapping(cls, mapping: Mapping[FKey, Rational | str]) -> FPart:
        return cls(tuple((k, to_scalar(c)) for k, c in mapping.items()))

    def as_dict(self) -> dict[FKey, Fraction]:
        return dict(self.entries)

    def items(self) -> Iterable[tuple[FKey, Fraction]]:
        return iter(self.entries)

    def get(self, i: int, j: int) -> Fraction:
        return self.as_dict().get((i, j), Fraction(0))

    @property
    def degree(self) -> int:
        """max(i, j) over stored entries, -1 when empty."""
        return max((max(i, j) for (i, j), _ in self.entries), default=-1)

    def __bool__(self) -> bool:
        return bool(self.entries)

    def __len__(self) -> int:
        return len(self.entries)


# =============================================================================
# Operator
# =============================================================================

@dataclass(frozen=True, slots=True)
class Operator:
    """Canonical form: graded K[H]-coefficients plus a finite e-matrix part."""

    graded: tuple[tuple[int, HPoly], ...] = ()
    fpart: FPart = FPart()

    def __post_init__(self) -> None:
        merged: dict[int, HPoly] = {}
        for k, b in self.graded:
            if not isinstance(b, HPoly):
                raise TypeError("graded coefficients must be HPoly")
            merged[k] = merged[k] + b if k in merged else b
        cleaned = tuple(sorted((k, b) for k, b in merged.items() if not b.is_zero))
        object.__setattr__(self, "graded", cleaned)

    # --- constructors -------------------------------------------------------

    @classmethod
    def build(
        cls,
        graded: Mapping[int, HPoly] | None = None,
        fpart: Mapping[FKey, Rational | str] | None = None,
    ) -> Operator:
        return cls(tuple((graded or {}).items()), FPart.from_mapping(fpart or {}))

    @classmethod
    def scalar(cls, value: Rational | str) -> Operator:
        return cls.hpoly(HPoly.constant(value))

    @classmethod
    def hpoly(cls, p: HPoly) -> Operator:
        return cls(((0, p),))

    # --- views --------------------------------------------------------------

    def graded_map(self) -> dict[int, HPoly]:
        return dict(self.graded)

    def coefficient(self, k: int) -> HPoly:
        return self.graded_map().get(k, HPoly())

    @property
    def is_zero(self) -> bool:
        return not self.graded and not self.fpart

    # --- python operators ---------------------------------------------------

    def __add__(self, other: Operator | Rational) -> Operator:
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return add(self, other)

    __radd__ = __add__

    def __neg__(self) -> Operator:
        return scale(self, -1)

    def __sub__(self, other: Operator | Rational) -> Operator:
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return add(self, -other)

    def __rsub__(self, other: Rational) -> Operator:
        return add(-self, _coerce(other))

    def __mul__(self, other: Operator | Rational) -> Operator:
        if isinstance(other, (int, Rational)):
            return scale(self, other)
        if not isinstance(other, Operator):
            return NotImplemented
        return mul(self, other)

    def __rmul__(self, other: Rational) -> Operator:
        if isinstance(other, (int, Rational)):
            return scale(self, other)
        return NotImplemented

    def __pow__(self, exponent: int) -> Operator:
        return power(self, exponent)

    def __str__(self) -> str:
        from .lang import format_operator

        return format_operator(self)


def _coerce(value: Operator | Rational) -> Operator | None:
    if isinstance(value, Operator):
        return value
    if isinstance(value, (int, Rational)):
        return Operator.scalar(value)
    return None


# =============================================================================
# Named elements
# =============================================================================

def d_power(k: int) -> Operator:
    """D^k."""
    if k < 0:
        raise ValueError("power must be natural")
    return Operator(((-k, HPoly.one()),))


def i_power(k: int) -> Operator:
    """I^k."""
    if k < 0:
        raise ValueError("power must be natural")
    return Operator(((k, HPoly.one()),))


def e_unit(i: int, j: int, coeff: Rational | str = 1) -> Operator:
    return Operator(fpart=FPart((((i, j), to_scalar(coeff)),)))


ZERO = Operator()
ONE = Operator.scalar(1)
DIFF = d_power(1)
INTEG = i_power(1)
H_OP = Operator.hpoly(HPoly.variable())
# x = I*H = (H - 1)*I
X_OP = Operator(((1, HPoly((Fraction(-1), Fraction(1)))),))


def x_power(k: int) -> Operator:
    return power(X_OP, k)


# =============================================================================
# Ring operations
# =============================================================================

def add(a: Operator, b: Operator) -> Operator:
    """Coefficient-wise sum."""
    return Operator(a.graded + b.graded, FPart(a.fpart.entries + b.fpart.entries))


def scale(a: Operator, c: Rational | str) -> Operator:
    factor = to_scalar(c)
    return Operator(
        tuple((k, b * factor) for k, b in a.graded),
        FPart(tuple((key, v * factor) for key, v in a.fpart.entries)),
    )


def mul(a: Operator, b: Operator) -> Operator:
    """
    Canonical form of the product a*b.

    Each pair of terms is reduced by the relation table:
      v_i beta(H)     = beta(H - i) v_i
      v_i v_j         = v_{i+j}, except I^i D^m = v_{i-m} - sum_{k=1..min(i,m)} e_{i-k, m-k}
      alpha(H) e_st   = alpha(s + 1) e_st,     e_st beta(H) = beta(t + 1) e_st
      v_i e_st        = e_{s+i, t}  (zero when s + i < 0)
      e_st v_j        = e_{s, t-j}  (zero when t - j < 0)
      e_ij e_kl       = delta_jk e_il
    """
    graded: dict[int, HPoly] = {}
    fpart: dict[FKey, Fraction] = defaultdict(Fraction)

    def add_graded(k: int, p: HPoly) -> None:
        graded[k] = graded[k] + p if k in graded else p

    for i, alpha in a.graded:
        for j, beta in b.graded:
            gamma = alpha * poly_shift(beta, -i)
            add_graded(i + j, gamma)
            if i > 0 and j < 0:
                for k in range(1, min(i, -j) + 1):
                    fpart[(i - k, -j - k)] -= gamma(i - k + 1)
        for (s, t), lam in b.fpart.entries:
            row = s + i
            if row >= 0:
                fpart[(row, t)] += lam * alpha(row + 1)

    for (s, t), lam in a.fpart.entries:
        for j, beta in b.graded:
            col = t - j
            if col >= 0:
                fpart[(s, col)] += lam * beta(t + 1)
        for (k, l), mu in b.fpart.entries:
            if t == k:
                fpart[(s, l)] += lam * mu

    return Operator(tuple(graded.items()), FPart(tuple(fpart.items())))


def power(a: Operator, exponent: int) -> Operator:
    if exponent < 0:
        raise ValueError("operator exponent must be natural")
    result = ONE
    base = a
    while exponent:
        if exponent & 1:
            result = mul(result, base)
        base = mul(base, base)
        exponent >>= 1
    return result


def commutator(a: Operator, b: Operator) -> Operator:
    return add(mul(a, b), scale(mul(b, a), -1))


def star(a: Operator) -> Operator:
    """The involution D* = I, I* = D, H* = H, e_ij* = e_ji."""
    return Operator(
        tuple((-k, poly_shift(b, k)) for k, b in a.graded),
        FPart(tuple(((j, i), c) for (i, j), c in a.fpart.entries)),
    )


# =============================================================================
# Queries
# =============================================================================

def deg_F(a: Operator) -> int:
    return a.fpart.degree


def is_compact(a: Operator) -> bool:
    """True iff a lies in F (no graded part)."""
    return not a.graded


def support_bounds(a: Operator) -> tuple[int, int]:
    """(pi_minus, pi_plus): extreme graded degrees."""
    if is_compact(a):
        raise DomainError("no graded part")
    degrees = [k for k, _ in a.graded]
    return min(degrees), max(degrees)


def trace_F(f: Operator) -> Fraction:
    if not is_compact(f):
        raise DomainError("trace defined only on F")
    return sum((c for (i, j), c in f.fpart.entries if i == j), Fraction(0))


def graded_component(a: Operator, k: int) -> Operator:
    """Homogeneous part of degree k; e_ij has degree i - j."""
    return Operator(
        tuple((d, b) for d, b in a.graded if d == k),
        FPart(tuple(((i, j), c) for (i, j), c in a.fpart.entries if i - j == k)),
    )


def in_K_plus_F(a: Operator) -> bool:
    return all(k == 0 and b.is_constant for k, b in a.graded)


def scalar_part(a: Operator) -> Fraction:
    """lambda of a = lambda + f in K + F."""
    if not in_K_plus_F(a):
        raise DomainError("determinant defined only on K+F")
    return a.coefficient(0).coeff(0)


def fpart_E_basis(a: Operator) -> dict[FKey, Fraction]:
    """Coefficients in the monomial units E_ij, using e_ij = (j!/i!) E_ij."""
    return {
        (i, j): c * Fraction(factorial(j), factorial(i))
        for (i, j), c in a.fpart.entries
    }


def fpart_from_E_basis(entries: Mapping[FKey, Rational | str]) -> Operator:
    return Operator.build(
        fpart={
            (i, j): to_scalar(c) * Fraction(factorial(i), factorial(j))
            for (i, j), c in entries.items()
        }
    )
