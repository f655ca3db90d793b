"""
Units - the group K*(1+F)*, one-sided inverses, the kappa shift and regularity.

Elements of K + F are lambda + f with a finite matrix f; determinants and
inverses reduce to the top-left (d+1) x (d+1) block, d = deg_F.
"""

from __future__ import annotations

import logging
from fractions import Fraction
from typing import Iterator

from ..errors import CertificationError, DomainError
from ..schemas import OneSidedWitness, RegularityFlags
from . import linalg
from .action import analyze, classify_structural, truncation
from .opcore import (
    ONE,
    Operator,
    d_power,
    deg_F,
    fpart_E_basis,
    i_power,
    in_K_plus_F,
    is_compact,
    mul,
    scalar_part,
    star,
)

logger = logging.getLogger(__name__)


# =============================================================================
# Determinant and inversion on K + F
# =============================================================================

def _require_K_plus_F(a: Operator) -> tuple[Fraction, int]:
    if not in_K_plus_F(a):
        raise DomainError("determinant defined only on K+F")
    return scalar_part(a), deg_F(a)


def _block(a: Operator, lam: Fraction, size: int) -> list[list[Fraction]]:
    """lambda * I + f on indices 0..size-1."""
    block = [[lam if r == c else Fraction(0) for c in range(size)] for r in range(size)]
    for (i, j), c in a.fpart.entries:
        block[i][j] += c
    return block


def det_KF(a: Operator) -> Fraction:
    """0 when lambda = 0, else lambda * det(1 + f / lambda) on the finite block."""
    lam, d = _require_K_plus_F(a)
    if lam == 0:
        return Fraction(0)
    block = _block(a, lam, d + 1)
    normalized = [[c / lam for c in row] for row in block]
    return lam * linalg.det(normalized)


def det_KF_E_basis(a: Operator) -> Fraction:
    """det_KF computed from the E_ij coefficients; equals det_KF."""
    lam, d = _require_K_plus_F(a)
    if lam == 0:
        return Fraction(0)
    size = d + 1
    block = [[Fraction(1) if r == c else Fraction(0) for c in range(size)] for r in range(size)]
    for (i, j), c in fpart_E_basis(a).items():
        block[i][j] += c / lam
    return lam * linalg.det(block)


def is_unit(a: Operator) -> bool:
    return in_K_plus_F(a) and det_KF(a) != 0


def unit_inverse(u: Operator) -> Operator:
    """Inverse of u in K + F by inverting its finite block."""
    lam, d = _require_K_plus_F(u)
    value = det_KF(u)
    if value == 0:
        raise DomainError(f"not a unit: det = {value}")
    size = d + 1
    inverse = linalg.inverse(_block(u, lam, size))
    entries = {
        (r, c): inverse[r][c] - (1 / lam if r == c else 0)
        for r in range(size) for c in range(size)
    }
    result = Operator.scalar(1 / lam) + Operator.build(fpart=entries)
    if mul(u, result) != ONE or mul(result, u) != ONE:
        raise CertificationError("unit inverse failed its check")
    return result


# =============================================================================
# One-sided inverses
# =============================================================================

def _left_unit_factor(a: Operator, n: int) -> Operator | None:
    """u in the unit group with a = u I^n, or None when a is not left invertible."""
    reduced = mul(a, d_power(n))  # columns 0..n-1 of reduced are zero
    lam = reduced.coefficient(0).coeff(0)
    size = max(deg_F(reduced), n - 1) + 1
    block = _block(reduced, lam, size)

    columns = [[block[r][c] for r in range(size)] for c in range(n, size)]
    if linalg.rank(columns, size) < len(columns):
        return None
    chosen = []
    for t in range(size):
        if len(columns) == size:
            break
        standard = [Fraction(1 if r == t else 0) for r in range(size)]
        if linalg.rank(columns + [standard], size) == len(columns) + 1:
            columns.append(standard)
            chosen.append(t)
    completion = Operator.build(fpart={(t, j): 1 for j, t in enumerate(chosen)})
    logger.debug("left_inverse: completed columns 0..%d with rows %s", n - 1, chosen)
    return reduced + completion


def left_inverse(a: Operator) -> OneSidedWitness | None:
    """Witness a = u I^n with inverse D^n u^-1, or None if a has no left inverse."""
    graded = a.graded
    if len(graded) != 1:
        return None
    n, coeff = graded[0]
    if n < 0 or not coeff.is_constant:
        return None
    u = _left_unit_factor(a, n)
    if u is None or not is_unit(u):
        return None
    inverse = mul(d_power(n), unit_inverse(u))
    if mul(inverse, a) != ONE or mul(u, i_power(n)) != a:
        raise CertificationError("left inverse failed its check")
    return OneSidedWitness(kind="left", n=n, unit_factor=u, inverse=inverse)


def right_inverse(b: Operator) -> OneSidedWitness | None:
    """Star-dual of left_inverse: b = D^n u with inverse u^-1 I^n."""
    dual = left_inverse(star(b))
    if dual is None:
        return None
    u = star(dual.unit_factor)
    inverse = star(dual.inverse)
    if mul(b, inverse) != ONE:
        raise CertificationError("right inverse failed its check")
    return OneSidedWitness(kind="right", n=dual.n, unit_factor=u, inverse=inverse)


def _perturbations(n: int) -> Iterator[Operator]:
    """e_ij with j < n in increasing (i, j); infinite."""
    i = 0
    while True:
        for j in range(n):
            yield Operator.build(fpart={(i, j): 1})
        i += 1


def left_inverse_set_sample(a: Operator, k: int) -> list[Operator]:
    """k distinct left inverses (D^n + g) u^-1, g supported in columns < n."""
    if k <= 0:
        return []
    witness = left_inverse(a)
    if witness is None:
        raise DomainError("operator has no left inverse")
    n = witness.n
    u_inv = unit_inverse(witness.unit_factor)
    samples = [witness.inverse]
    if n > 0:
        for g in _perturbations(n):
            if len(samples) >= k:
                break
            candidate = mul(d_power(n) + g, u_inv)
            if mul(candidate, a) != ONE:
                raise CertificationError("sampled left inverse failed its check")
            if candidate not in samples:
                samples.append(candidate)
    return samples[:k]


# =============================================================================
# Kappa shift
# =============================================================================

def kappa_shift(u: Operator, n: int) -> Operator:
    """kappa^n(lambda + f) = lambda + I^n f D^n, i.e. e_ij -> e_{i+n, j+n}."""
    if not in_K_plus_F(u):
        raise DomainError("kappa is defined only on K+F")
    if n < 0:
        raise ValueError("kappa exponent must be natural")
    lam = scalar_part(u)
    shifted = Operator.build(fpart={(i + n, j + n): c for (i, j), c in u.fpart.entries})
    return Operator.scalar(lam) + shifted if lam else shifted


# =============================================================================
# Regularity
# =============================================================================

def _injective(a: Operator) -> bool:
    return classify_structural(a).injective


def regularity(a: Operator) -> RegularityFlags:
    """right_regular: a injective on K[x]; left_regular: star(a) injective."""
    if is_compact(a):
        return RegularityFlags(left_regular=False, right_regular=False, regular=False)
    right = _injective(a)
    left = _injective(star(a))
    return RegularityFlags(left_regular=left, right_regular=right, regular=left and right)


def corner_image_criterion(a: Operator, n_max: int | None = None) -> bool:
    """
    For n = 0..n_max, the projection of im(a) onto K[x]_{<=n} is onto.

    Holds for every n exactly when star(a) is injective; the default n_max is
    the certified window of star(a), which bounds the degrees of ker(star(a)).
    """
    if is_compact(a):
        return False
    if n_max is None:
        n_max = analyze(star(a)).window_used
    low = min(k for k, _ in a.graded)
    cols = max(n_max - low, deg_F(a)) + 1
    matrix = truncation(a, cols).padded(n_max + 1)
    for n in range(n_max + 1):
        if linalg.rank(matrix[: n + 1], cols) < n + 1:
            return False
    return True
