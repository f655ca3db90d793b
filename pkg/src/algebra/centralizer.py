"""
Centralizer - closed forms for distinguished elements and a truncated
commutant solver inside F.
"""

import logging
import math

from ..errors import DomainError
from ..schemas import CentralizerDescription
from . import linalg
from .exactmath import HPoly, cauchy_bound, integer_roots
from .opcore import Operator, commutator, e_unit, mul, x_power

logger = logging.getLogger(__name__)


def commutes(a: Operator, b: Operator) -> bool:
    return mul(a, b) == mul(b, a)


def equal_value_pairs(alpha: HPoly) -> list[tuple[int, int]]:
    """All (s-1, t-1) with integers s > t >= 1 and alpha(s) = alpha(t)."""
    # alpha is strictly monotone past every critical point, all of which lie below B
    bound = math.ceil(1 + cauchy_bound(alpha.derivative()))
    pairs = set()
    for t in range(1, bound + 1):
        level = alpha - alpha(t)
        for s in integer_roots(level):
            if s > t:
                pairs.add((s - 1, t - 1))
    return sorted(pairs)


def centralizer_hpoly(alpha: HPoly) -> CentralizerDescription:
    """Cen(alpha(H)) = D1 + span{e_{s-1,t-1}} + span{e_{t-1,s-1}}."""
    if alpha.is_constant:
        raise DomainError("centralizer is all of I1")
    return CentralizerDescription(kind="D1_plus_pairs", pair_basis=equal_value_pairs(alpha))


def commutant_in_F(a: Operator, N: int) -> list[Operator]:
    """Echelon basis of {f in F : deg_F(f) <= N, [a, f] = 0}."""
    unknowns = [(s, t) for s in range(N + 1) for t in range(N + 1)]
    images = [commutator(a, e_unit(s, t)).fpart.as_dict() for s, t in unknowns]
    keys = sorted({key for image in images for key in image})
    matrix = [[image.get(key, 0) for image in images] for key in keys]
    logger.debug("commutant_in_F: %d equations in %d unknowns", len(keys), len(unknowns))

    basis = [
        Operator.build(fpart={unknowns[i]: c for i, c in enumerate(v) if c})
        for v in linalg.nullspace(matrix, len(unknowns))
    ]
    return [f for f in basis if not f.is_zero]


def commutant_dimensions(a: Operator, windows: range) -> list[int]:
    return [len(commutant_in_F(a, N)) for N in windows]


def stabilization_note(a: Operator, N: int) -> str | None:
    """Informational note when dim commutant_in_F(a, N-1) = dim commutant_in_F(a, N)."""
    if N < 1:
        return None
    previous, current = commutant_dimensions(a, range(N - 1, N + 1))
    if previous == current:
        return f"dimension {current} unchanged between windows {N - 1} and {N} (not a proof)"
    return None


def centralizer_closed_form(a: Operator) -> CentralizerDescription | None:
    """
    Closed form for lambda*D^i, lambda*I^i, lambda*x^i (i >= 1) or alpha(H);
    None for every other operator.
    """
    if a.is_zero:
        raise DomainError("centralizer is all of I1")
    if a.fpart or len(a.graded) != 1:
        return None
    (k, coeff), = a.graded
    if k == 0:
        return centralizer_hpoly(coeff)
    if coeff.is_constant:
        return CentralizerDescription(kind="poly_in_I" if k > 0 else "poly_in_D")
    if k > 0 and a == x_power(k) * coeff.leading:
        return CentralizerDescription(kind="poly_in_X")
    return None
