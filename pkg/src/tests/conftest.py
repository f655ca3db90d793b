"""
Shared fixtures: seeded random generators for polynomials and operators.
"""

import random
from fractions import Fraction

import pytest

from src.algebra.exactmath import HPoly, XPoly
from src.algebra.opcore import Operator, d_power, i_power, is_compact
from src.algebra.units import det_KF

SEED = 20100611


class OperatorFactory:
    """Small random elements; sizes are kept low so exact analysis stays fast."""

    def __init__(self, rng: random.Random):
        self.rng = rng

    def scalar(self, bound: int = 3, nonzero: bool = False) -> Fraction:
        while True:
            value = Fraction(self.rng.randint(-bound, bound), self.rng.choice([1, 1, 1, 2]))
            if value or not nonzero:
                return value

    def hpoly(self, max_degree: int = 2, nonzero: bool = False) -> HPoly:
        while True:
            degree = self.rng.randint(0, max_degree)
            p = HPoly(tuple(self.scalar() for _ in range(degree + 1)))
            if not nonzero or not p.is_zero:
                return p

    def xpoly(self, max_degree: int = 4) -> XPoly:
        degree = self.rng.randint(0, max_degree)
        return XPoly(tuple(self.scalar() for _ in range(degree + 1)))

    def finite(self, size: int = 3, terms: int = 3) -> Operator:
        entries = {
            (self.rng.randint(0, size), self.rng.randint(0, size)): self.scalar(nonzero=True)
            for _ in range(self.rng.randint(1, terms))
        }
        return Operator.build(fpart=entries)

    def operator(self, low: int = -2, high: int = 2, with_finite: bool = True) -> Operator:
        graded = {
            k: self.hpoly()
            for k in range(low, high + 1)
            if self.rng.random() < 0.6
        }
        a = Operator.build(graded=graded)
        if with_finite and self.rng.random() < 0.7:
            a = a + self.finite()
        return a

    def fredholm(self, low: int = -2, high: int = 2) -> Operator:
        while True:
            a = self.operator(low, high)
            if not is_compact(a):
                return a

    def k_plus_f(self, scalar: Fraction | None = None) -> Operator:
        lam = self.scalar(nonzero=True) if scalar is None else scalar
        return Operator.scalar(lam) + self.finite()

    def unit(self) -> Operator:
        while True:
            u = self.k_plus_f()
            if det_KF(u) != 0:
                return u

    def generator_word(self, length: int = 4) -> Operator:
        """Product of random generators D, I, H, x and matrix units."""
        letters = [
            d_power(1),
            i_power(1),
            Operator.hpoly(HPoly.variable()),
            Operator.build(graded={1: HPoly((Fraction(-1), Fraction(1)))}),
            Operator.build(fpart={(self.rng.randint(0, 2), self.rng.randint(0, 2)): 1}),
        ]
        result = Operator.scalar(self.scalar(nonzero=True))
        for _ in range(self.rng.randint(1, length)):
            result = result * self.rng.choice(letters)
        return result


@pytest.fixture
def rng() -> random.Random:
    return random.Random(SEED)


@pytest.fixture
def factory(rng: random.Random) -> OperatorFactory:
    return OperatorFactory(rng)
