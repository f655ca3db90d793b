"""
Tests for the action on K[x], certified analysis, solving and regularizers.
"""

from fractions import Fraction

import pytest

from src.algebra.action import (
    analyze,
    apply,
    apply_inverse,
    certified_window,
    classify_structural,
    column_image,
    index,
    index_factorization,
    is_bijective_on_polynomials,
    kernel_idempotent,
    left_regularizer,
    right_regularizer,
    solve,
    truncation,
)
from src.algebra import linalg
from src.algebra.exactmath import XPoly
from src.algebra.lang import parse
from src.algebra.opcore import DIFF, INTEG, ONE, d_power, e_unit, i_power, mul, star
from src.errors import DomainError

X = XPoly.variable()


# =============================================================================
# Applying operators
# =============================================================================

def test_generators_on_monomials():
    assert apply(DIFF, X ** 3) == 3 * X ** 2
    assert apply(INTEG, X ** 2) == X ** 3 * Fraction(1, 3)
    assert apply(parse("H"), X ** 2) == 3 * X ** 2
    assert apply(parse("x"), X + 1) == X ** 2 + X
    assert apply(e_unit(0, 2), X ** 2) == XPoly.constant(2)


def test_column_image_and_truncation():
    a = parse("D + I")
    assert column_image(a, 0) == {1: 1}
    assert column_image(a, 2) == {1: 1, 3: 1}
    matrix = truncation(a, 3)
    assert (matrix.rows, matrix.cols) == (4, 3)
    assert matrix.column(1) == [1, 0, 1, 0]


def test_truncation_rows_cover_the_finite_part():
    matrix = truncation(DIFF + e_unit(5, 0), 2)
    assert matrix.rows == 6
    assert matrix.entries[5][0] == 1


def test_truncation_of_a_product_is_the_matrix_product(factory):
    for _ in range(100):
        a, b = factory.operator(), factory.operator()
        right = truncation(b, 6)
        left = truncation(a, right.rows)
        product = linalg.matmul(left.as_lists(), right.as_lists())
        expected = truncation(mul(a, b), 6)
        size = max(len(product), expected.rows)
        product += [[0] * 6 for _ in range(size - len(product))]
        assert product == expected.padded(size)


# =============================================================================
# Index and analysis
# =============================================================================

def test_worked_example_d_plus_i():
    report = analyze(parse("D + I"))
    assert report.index == -1
    assert report.kernel_basis == []
    assert report.cokernel_basis == [XPoly.one()]
    assert report.injective and not report.surjective and not report.bijective
    assert report.window_used >= certified_window(parse("D + I"))


def test_cokernel_pivots_sit_on_the_highest_row():
    # columns of D + I: x^[1], x^[0] + x^[2], x^[1] + x^[3], ...
    matrix = truncation(parse("D + I"), 4)
    assert linalg.top_down_pivot_rows(matrix.as_lists(), 4) == {1, 2, 3, 4}


def test_derivative_analysis():
    report = analyze(DIFF * DIFF)
    assert report.index == 2
    assert report.kernel_basis == [XPoly.one(), X]
    assert report.cokernel_basis == []
    assert report.surjective


def test_kernel_from_integer_roots():
    # (H - 3) kills x^[2]
    report = analyze(parse("H - 3"))
    assert report.index == 0
    assert report.kernel_basis == [X ** 2]
    assert report.cokernel_basis == [X ** 2]


@pytest.mark.parametrize("i", range(9))
def test_index_of_powers(i):
    assert index(d_power(i)) == i
    assert index(i_power(i)) == -i


def test_compact_operators_have_finite_image(factory):
    for _ in range(50):
        f = factory.finite()
        ranks = [linalg.rank(truncation(f, cols).as_lists(), cols) for cols in (5, 10, 20)]
        assert ranks[0] == ranks[1] == ranks[2]
        with pytest.raises(DomainError):
            analyze(f)


def test_index_rejects_compact_operators():
    with pytest.raises(DomainError, match="index undefined for compact operators"):
        index(e_unit(0, 0))
    with pytest.raises(DomainError, match="not Fredholm"):
        analyze(e_unit(1, 0))


def test_index_is_additive(factory):
    for _ in range(200):
        a, b = factory.fredholm(), factory.fredholm()
        assert index(mul(a, b)) == index(a) + index(b)


def test_index_changes_sign_under_star_for_one_sided_invertibles(factory):
    for _ in range(100):
        u, n = factory.unit(), factory.rng.randint(0, 4)
        for a in (mul(u, i_power(n)), mul(d_power(n), u)):
            assert index(star(a)) == -index(a)


def test_index_under_star_fails_in_general():
    a = parse("1 + D")
    assert index(a) == 0
    assert star(a) == parse("1 + I")
    assert index(star(a)) == -1


def test_index_ignores_compact_perturbations(factory):
    for _ in range(200):
        a = factory.fredholm()
        assert index(a + factory.finite()) == index(a)


def test_analysis_matches_index_and_structural_flags(factory):
    for _ in range(100):
        a = factory.fredholm(low=-2, high=1)
        report = analyze(a)
        assert len(report.kernel_basis) - len(report.cokernel_basis) == index(a)
        flags = classify_structural(a)
        assert flags.as_tuple() == (report.injective, report.surjective, report.bijective)


def test_structural_classification_examples():
    assert classify_structural(parse("1 + D")).as_tuple() == (True, True, True)
    assert classify_structural(parse("1 + I")).as_tuple() == (True, False, False)


def test_larger_window_gives_the_same_answer():
    a = parse("D^2 + H*e[0,1]")
    assert analyze(a, window=40).kernel_basis == analyze(a).kernel_basis


# =============================================================================
# Solving
# =============================================================================

def test_bijective_inverse():
    a = parse("1 + D^2")
    assert is_bijective_on_polynomials(a)
    assert apply_inverse(a, X ** 3) == X ** 3 - 6 * X


def test_apply_inverse_on_random_bijective(factory):
    checked = 0
    for _ in range(60):
        a = factory.operator(low=-2, high=0)
        if not is_bijective_on_polynomials(a):
            continue
        p = factory.xpoly()
        assert apply(a, apply_inverse(a, p)) == p
        checked += 1
    assert checked > 0


def test_apply_inverse_rejects_non_bijective():
    with pytest.raises(DomainError, match="not invertible on K\\[x\\]"):
        apply_inverse(DIFF, X)


@pytest.mark.parametrize("n", [0, 1, 2])
def test_even_powers_are_not_in_the_image_of_d_plus_i(n):
    solution = solve(parse("D + I"), X ** (2 * n))
    assert solution.particular is None
    assert solution.homogeneous_basis == []


def test_solve_with_kernel():
    solution = solve(DIFF, XPoly.one())
    assert solution.particular == X
    assert solution.homogeneous_basis == [XPoly.one()]


def test_solve_random(factory):
    for _ in range(50):
        a = factory.fredholm()
        q = factory.xpoly()
        p = apply(a, q)
        solution = solve(a, p)
        assert solution.particular is not None
        assert apply(a, solution.particular) == p


def test_solve_rejects_compact():
    with pytest.raises(DomainError):
        solve(e_unit(0, 0), X)


# =============================================================================
# Index factorization
# =============================================================================

def test_index_factorization_examples():
    right = index_factorization(parse("D + I"))
    assert right.side == "right"
    assert right.factor == parse("1 + D^2")
    left = index_factorization(DIFF * DIFF)
    assert left.side == "left"
    assert left.factor == ONE


def test_index_factorization_random(factory):
    for _ in range(50):
        a = factory.fredholm()
        result = index_factorization(a)
        assert index(result.factor) == 0
        if result.side == "left":
            assert mul(d_power(result.index), result.factor) == a
        else:
            assert mul(result.factor, i_power(-result.index)) == a


# =============================================================================
# Regularizers and kernel projections
# =============================================================================

def test_left_regularizer(factory):
    for _ in range(50):
        a = factory.fredholm(low=-2, high=1)
        report = analyze(a)
        c = left_regularizer(a)
        result = analyze(mul(c, a))
        assert result.surjective
        assert result.kernel_basis == report.kernel_basis
        assert index(c) == len(report.cokernel_basis)


def test_right_regularizer(factory):
    for _ in range(50):
        a = factory.fredholm(low=-1, high=2)
        report = analyze(a)
        c = right_regularizer(a)
        result = analyze(mul(a, c))
        assert result.injective
        assert result.cokernel_basis == report.cokernel_basis


def test_regularizers_of_d_plus_i():
    a = parse("D + I")
    assert right_regularizer(a) == ONE
    assert analyze(mul(left_regularizer(a), a)).bijective


def test_kernel_idempotent(factory):
    for _ in range(50):
        a = factory.fredholm(low=-2, high=1)
        f = kernel_idempotent(a)
        assert mul(f, f) == f
        for q in analyze(a).kernel_basis:
            assert apply(f, q) == q
            assert apply(a, q) == XPoly()


def test_kernel_idempotent_of_second_derivative():
    assert kernel_idempotent(DIFF * DIFF) == e_unit(0, 0) + e_unit(1, 1)


def test_scalar_multiple_keeps_kernel():
    a = parse("H - 3")
    assert analyze(a * Fraction(5, 2)).kernel_basis == analyze(a).kernel_basis
