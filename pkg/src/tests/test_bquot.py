"""
Tests for the quotient B1 = I1/F: projection, products, orbits and normal forms.
"""

from fractions import Fraction

import pytest

from src.algebra.action import index
from src.algebra.bquot import (
    B1_ONE,
    B1Element,
    b1_mul,
    b1_power,
    deg_inv_d,
    index_via_b1,
    is_normal,
    normalize,
    orbit_shift,
    poly_less,
    project,
)
from src.algebra.exactmath import HPoly
from src.algebra.lang import parse, parse_b1
from src.algebra.opcore import X_OP, e_unit, mul
from src.errors import DomainError

H = HPoly.variable()
D = B1Element.d_power(1)


# =============================================================================
# Projection and products
# =============================================================================

def test_projection_examples():
    assert project(X_OP) == B1Element.build({-1: H})
    assert project(parse("I*D")) == B1_ONE
    assert project(e_unit(2, 3)).is_zero


def test_products_move_coefficients_past_d():
    h = B1Element.hpoly(H)
    assert b1_mul(h, D) == B1Element.build({1: H - 1})
    assert b1_mul(D, h) == B1Element.build({1: H})


def test_projection_is_a_ring_homomorphism(factory):
    for _ in range(200):
        a, b = factory.operator(), factory.operator()
        assert project(mul(a, b)) == b1_mul(project(a), project(b))
        assert project(a + b) == project(a) + project(b)


def test_b1_powers():
    assert b1_power(D, -2) == B1Element.d_power(-2)
    assert b1_power(D * 3, -1) == B1Element.build({-1: HPoly.constant(Fraction(1, 3))})
    assert b1_mul(D, b1_power(D, -1)) == B1_ONE
    with pytest.raises(DomainError, match="only monomials"):
        b1_power(B1Element.hpoly(H), -1)


def test_index_via_b1(factory):
    assert index_via_b1(parse("D + I")) == -1
    assert deg_inv_d(parse_b1("D^-2 + D")) == 2
    for _ in range(200):
        a = factory.fredholm()
        assert index_via_b1(a) == index(a)
    with pytest.raises(DomainError, match="index undefined for compact operators"):
        index_via_b1(e_unit(0, 0))


# =============================================================================
# Orbits and ordering
# =============================================================================

def test_orbit_shift():
    assert orbit_shift(H - 1, H - 3) == -2
    assert orbit_shift(H ** 2 + 1, H ** 2 + 1) == 0
    assert orbit_shift(H ** 2 + 1, H ** 2 + 2) is None
    assert orbit_shift(H ** 2 + 1, H ** 2 + 2 * H + 2) == 1
    assert orbit_shift(2 * H - 2, H + 1) == 2
    assert orbit_shift(H, H ** 2 + 1) is None


def test_orbit_shift_requires_irreducible_inputs():
    with pytest.raises(DomainError, match="irreducible"):
        orbit_shift(H ** 2 - 1, H)


def test_poly_less():
    assert poly_less(H - 3, H - 1)
    assert not poly_less(H - 1, H - 3)
    assert poly_less(H - 1, H ** 2 + 1)
    assert not poly_less(H, H)
    with pytest.raises(DomainError, match="nonzero"):
        poly_less(HPoly(), H)


# =============================================================================
# Normal elements
# =============================================================================

@pytest.mark.parametrize(
    "text, expected",
    [
        ("D^-1*(H - 1) + H - 3", True),
        ("D^-1*(H - 3) + H - 1", False),
        ("D^-1 + H", True),
    ],
)
def test_is_normal(text, expected):
    assert is_normal(parse_b1(text)) is expected


@pytest.mark.parametrize("text", ["H", "D^-1 + D", "D^-2", "0"])
def test_is_normal_rejects_other_shapes(text):
    with pytest.raises(DomainError, match="not of normal-candidate shape"):
        is_normal(parse_b1(text))


def test_normalize_worked_example():
    result = normalize(parse_b1("D^-1*(H - 3) + H - 1"))
    assert result.alpha == (H - 1) * (H - 2) * (H - 3)
    assert result.beta == (H - 2) * (H - 3) * (H - 4)
    assert result.normal == parse_b1("D^-1*(H - 3) + H - 4")
    assert str(result.normal) == "D^-1*(H - 3) + H - 4"


def test_normalize_keeps_normal_input():
    b = parse_b1("D^-1*(H - 1) + H - 3")
    result = normalize(b)
    assert result.alpha == HPoly.one() and result.beta == HPoly.one()
    assert result.normal == b


def _check_normalization(b: B1Element) -> None:
    result = normalize(b)
    alpha, beta = B1Element.hpoly(result.alpha), B1Element.hpoly(result.beta)
    assert is_normal(result.normal)
    assert b1_mul(beta, b) == b1_mul(result.normal, alpha)


@pytest.mark.parametrize("shift", range(0, 5))
def test_normalize_linear_family(shift):
    _check_normalization(B1Element.build({-1: H - 3, 0: H - 3 + shift}))


def test_normalize_second_order():
    _check_normalization(parse_b1("D^-2*(H + 1) + D^-1*H + H + 2"))


def test_normalize_random_candidates(factory):
    for _ in range(20):
        m = factory.rng.randint(1, 2)
        coeffs = {k: factory.hpoly() for k in range(-m + 1, 0)}
        coeffs[-m] = factory.hpoly(nonzero=True)
        coeffs[0] = factory.hpoly(nonzero=True)
        _check_normalization(B1Element.build(coeffs))
