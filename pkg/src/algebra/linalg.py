"""
Exact linear algebra over Q on top of sympy's DomainMatrix.

Matrices travel through the package as lists of rows of Fractions; this
module converts at the boundary and keeps every result exact.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

Rows = Sequence[Sequence[Fraction]]


def _to_qq(value: Fraction):
    return QQ(value.numerator, value.denominator)


def _to_fraction(value) -> Fraction:
    rational = QQ.to_sympy(value)
    return Fraction(int(rational.p), int(rational.q))


def to_domain_matrix(rows: Rows, ncols: int) -> DomainMatrix:
    return DomainMatrix([[_to_qq(c) for c in row] for row in rows], (len(rows), ncols), QQ)


def from_domain_matrix(matrix: DomainMatrix) -> list[list[Fraction]]:
    return [[Fraction(int(c.p), int(c.q)) for c in row] for row in matrix.to_Matrix().tolist()]


def rref(rows: Rows, ncols: int) -> tuple[list[list[Fraction]], tuple[int, ...]]:
    """Reduced row echelon form (nonzero rows only) and pivot columns."""
    if not rows or ncols == 0:
        return [], ()
    reduced, pivots = to_domain_matrix(rows, ncols).rref()
    dense = from_domain_matrix(reduced)
    return dense[: len(pivots)], tuple(pivots)


def rank(rows: Rows, ncols: int) -> int:
    return len(rref(rows, ncols)[1])


def nullspace(rows: Rows, ncols: int) -> list[list[Fraction]]:
    """Basis of {v : M v = 0}, one vector per free column."""
    reduced, pivots = rref(rows, ncols)
    basis = []
    for free in (c for c in range(ncols) if c not in pivots):
        vector = [Fraction(0)] * ncols
        vector[free] = Fraction(1)
        for row, pivot in zip(reduced, pivots):
            vector[pivot] = -row[free]
        basis.append(vector)
    return basis


def solve(rows: Rows, ncols: int, rhs: Sequence[Fraction]) -> list[Fraction] | None:
    """A particular solution of M v = rhs (free variables zero), or None."""
    augmented = [list(row) + [rhs[r]] for r, row in enumerate(rows)]
    reduced, pivots = rref(augmented, ncols + 1)
    if ncols in pivots:
        return None
    solution = [Fraction(0)] * ncols
    for row, pivot in zip(reduced, pivots):
        solution[pivot] = row[ncols]
    return solution


def det(rows: Rows) -> Fraction:
    if not rows:
        return Fraction(1)
    return _to_fraction(to_domain_matrix(rows, len(rows)).det())


def inverse(rows: Rows) -> list[list[Fraction]]:
    if not rows:
        return []
    return from_domain_matrix(to_domain_matrix(rows, len(rows)).inv())


def matmul(left: Rows, right: Rows) -> list[list[Fraction]]:
    if not left or not right:
        return [[] for _ in left]
    return from_domain_matrix(
        to_domain_matrix(left, len(right)) * to_domain_matrix(right, len(right[0]))
    )


def top_down_pivot_rows(rows: Rows, ncols: int) -> set[int]:
    """
    Rows carrying pivots of a column echelon form in which each column's pivot
    is its lowest-placed (highest index) nonzero entry after elimination.

    The complement of the returned set indexes coordinate vectors spanning a
    complement of the column space.
    """
    nrows = len(rows)
    if nrows == 0 or ncols == 0:
        return set()
    transposed_reversed = [[rows[nrows - 1 - r][c] for r in range(nrows)] for c in range(ncols)]
    _, pivots = rref(transposed_reversed, nrows)
    return {nrows - 1 - p for p in pivots}


def reduced_basis_descending(vectors: Sequence[Sequence[Fraction]], size: int) -> list[list[Fraction]]:
    """
    Reduced echelon basis of span(vectors) where pivots are the highest
    nonzero coordinate; each vector is scaled so its pivot is 1.
    Returned in ascending order of pivot position.
    """
    if not vectors:
        return []
    reversed_rows = [[Fraction(v[size - 1 - i]) if size - 1 - i < len(v) else Fraction(0)
                      for i in range(size)] for v in vectors]
    reduced, _ = rref(reversed_rows, size)
    basis = [list(reversed(row)) for row in reduced]
    return sorted(basis, key=lambda v: max(i for i, c in enumerate(v) if c != 0))

