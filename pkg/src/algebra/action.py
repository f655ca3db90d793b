"""
Action on K[x] - applying operators to polynomials and Fredholm analysis.

Operators act on the divided basis x^[s] = x^s/s! by

    v_k x^[s]      = x^[s+k]    (zero when s + k < 0)
    alpha(H) x^[s] = alpha(s+1) x^[s]
    e_ij x^[s]     = delta_js x^[i]

so the matrix entry (t, s) of a is b_{t-s}(t+1) + c_ts. Past the staircase
start m0 every column s has exact top degree s + pi_plus, which makes kernels
and cokernels computable from a finite, self-certifying window.
"""

from __future__ import annotations

import logging
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction

from ..errors import CertificationError, DomainError
from ..schemas import (
    AnalysisReport,
    IndexFactorization,
    SolutionSet,
    StructuralFlags,
    TruncationModel,
)
from . import linalg
from .exactmath import XPoly, integer_roots
from .opcore import (
    ONE,
    FPart,
    Operator,
    d_power,
    deg_F,
    i_power,
    is_compact,
    mul,
    support_bounds,
)

logger = logging.getLogger(__name__)

# Certificate failures tolerated before giving up (window doubles each time)
MAX_WINDOW_DOUBLINGS = 6


# =============================================================================
# Applying operators
# =============================================================================

@dataclass(frozen=True)
class TruncMatrix:
    """Columns 0..cols-1 of the matrix of an operator, exact in every row."""

    rows: int
    cols: int
    entries: tuple[tuple[Fraction, ...], ...]

    def column(self, s: int) -> list[Fraction]:
        return [self.entries[t][s] for t in range(self.rows)]

    def as_lists(self) -> list[list[Fraction]]:
        return [list(row) for row in self.entries]

    def padded(self, rows: int) -> list[list[Fraction]]:
        """Rows extended with zeros up to the given count."""
        zero = [Fraction(0)] * self.cols
        return self.as_lists() + [list(zero) for _ in range(rows - self.rows)]

    def to_model(self) -> TruncationModel:
        return TruncationModel(rows=self.rows, cols=self.cols, entries=self.as_lists())


def column_image(a: Operator, s: int) -> dict[int, Fraction]:
    """Divided-basis coordinates of a * x^[s]."""
    out: dict[int, Fraction] = defaultdict(Fraction)
    for k, b in a.graded:
        t = s + k
        if t >= 0:
            out[t] += b(t + 1)
    for (i, j), c in a.fpart.entries:
        if j == s:
            out[i] += c
    return {t: c for t, c in out.items() if c != 0}


def apply(a: Operator, p: XPoly) -> XPoly:
    """The polynomial a * p."""
    out: dict[int, Fraction] = defaultdict(Fraction)
    for s, c in enumerate(p.to_divided()):
        if c:
            for t, v in column_image(a, s).items():
                out[t] += c * v
    size = max(out, default=-1) + 1
    return XPoly.from_divided([out.get(t, Fraction(0)) for t in range(size)])


def truncation(a: Operator, cols: int) -> TruncMatrix:
    """
    Columns 0..cols-1 of the matrix of a.

    rows = max(cols + max(pi_plus, 0), deg_F + 1), enough for every column to
    be exact.
    """
    top = max((k for k, _ in a.graded), default=0)
    rows = max(cols + max(top, 0), deg_F(a) + 1)
    dense = [[Fraction(0)] * cols for _ in range(rows)]
    for s in range(cols):
        for t, v in column_image(a, s).items():
            dense[t][s] = v
    return TruncMatrix(rows, cols, tuple(tuple(row) for row in dense))


# =============================================================================
# Index and certified analysis
# =============================================================================

def _require_fredholm(a: Operator, message: str) -> None:
    if is_compact(a):
        raise DomainError(message)


def index(a: Operator) -> int:
    """dim ker - dim coker on K[x], which equals -pi_plus(a)."""
    _require_fredholm(a, "index undefined for compact operators")
    return -support_bounds(a)[1]


def staircase_start(a: Operator) -> int:
    """
    m0: beyond this column the matrix is a staircase of nonzero top entries.

    m0 = max(deg_F, largest s with b_p(s+p+1) = 0, -p-1 when p < 0), p = pi_plus.
    """
    p = support_bounds(a)[1]
    lead = a.coefficient(p)
    candidates = [0, deg_F(a)]
    if p < 0:
        candidates.append(-p - 1)
    candidates += [r - p - 1 for r in integer_roots(lead) if r - p - 1 >= 0]
    return max(candidates)


def certified_window(a: Operator) -> int:
    p = support_bounds(a)[1]
    return staircase_start(a) + 2 * abs(p) + 2


def _reduced_polys(vectors: list[list[Fraction]]) -> list[XPoly]:
    """Monic reduced basis (distinct leading degrees) of the span of divided vectors."""
    if not vectors:
        return []
    monomial = [XPoly.from_divided(v).coeffs for v in vectors]
    size = max((len(m) for m in monomial), default=0)
    basis = linalg.reduced_basis_descending([list(m) for m in monomial], size)
    return [XPoly(tuple(v)) for v in basis]


def _kernel_vectors(a: Operator, window: int) -> list[list[Fraction]]:
    matrix = truncation(a, window + 1)
    return linalg.nullspace(matrix.as_lists(), matrix.cols)


def _cokernel_rows(a: Operator, window: int) -> list[int]:
    p = support_bounds(a)[1]
    cols = window + abs(p) + 2
    target_rows = cols + p
    matrix = truncation(a, cols).as_lists()[:target_rows]
    pivots = linalg.top_down_pivot_rows(matrix, cols)
    return [t for t in range(target_rows) if t not in pivots]


def analyze(a: Operator, *, window: int | None = None,
            max_doublings: int = MAX_WINDOW_DOUBLINGS) -> AnalysisReport:
    """
    Exact kernel, cokernel and index of a acting on K[x].

    The starting window is the certified bound W (or the requested window when
    larger); the result is accepted only when every cokernel row lies at or
    below W + pi_plus and |ker| - |coker| = -pi_plus, otherwise W doubles.
    """
    _require_fredholm(a, "not Fredholm on K[x]")
    p = support_bounds(a)[1]
    current = max(certified_window(a), window or 0)
    logger.debug("analyze: pi_plus=%d, starting window %d", p, current)

    for attempt in range(max_doublings + 1):
        kernel = _reduced_polys(_kernel_vectors(a, current))
        coker_rows = _cokernel_rows(a, current)
        certified = (
            all(t <= current + p for t in coker_rows)
            and len(kernel) - len(coker_rows) == -p
        )
        if certified:
            cokernel = [XPoly.monomial(t) for t in coker_rows]
            return AnalysisReport(
                index=-p,
                kernel_basis=kernel,
                cokernel_basis=cokernel,
                injective=not kernel,
                surjective=not cokernel,
                bijective=not kernel and not cokernel,
                window_used=current,
            )
        logger.warning("analyze: window %d failed its certificate, doubling", current)
        current *= 2

    raise CertificationError(f"no certified window found up to {current // 2}")


# =============================================================================
# Structural classification
# =============================================================================

def _block(a: Operator, rows: int, cols: int) -> list[list[Fraction]]:
    if rows <= 0 or cols <= 0:
        return []
    return [row[:cols] for row in truncation(a, cols).padded(rows)[:rows]]


def _surjective_structural(a: Operator, p: int) -> bool:
    # a = sum_{i >= n} a_{-i} D^i + f, n = -p; V = K[x]_{<=d} is invariant
    if p > 0:
        return False
    n, d = -p, deg_F(a)
    if any(r >= d + 2 for r in integer_roots(a.coefficient(p))):
        return False
    if d < 0:
        return True
    return linalg.rank(_block(a, d + 1, d + n + 1), d + n + 1) == d + 1


def _injective_structural(a: Operator, p: int) -> bool:
    # a = a' I^n with a' = a D^n of nonpositive graded degree
    if p < 0:
        return False
    n = p
    reduced = mul(a, d_power(n)) if n else a
    lead = reduced.coefficient(0)
    m = max([deg_F(reduced)] + [r - 1 for r in integer_roots(lead)])
    if m < n:
        return True
    block = _block(reduced, m + 1, m + 1)
    columns = [row[n:] for row in block]
    return linalg.rank(columns, m + 1 - n) == m + 1 - n


def classify_structural(a: Operator) -> StructuralFlags:
    """Injective/surjective/bijective from finite block tests and integer roots."""
    _require_fredholm(a, "not Fredholm on K[x]")
    p = support_bounds(a)[1]
    injective = _injective_structural(a, p)
    surjective = _surjective_structural(a, p)
    return StructuralFlags(
        injective=injective, surjective=surjective, bijective=injective and surjective
    )


def is_bijective_on_polynomials(a: Operator) -> bool:
    """Membership in the monoid of operators that are automorphisms of K[x]."""
    return not is_compact(a) and classify_structural(a).bijective


# =============================================================================
# Inversion and solving
# =============================================================================

def apply_inverse(a: Operator, p: XPoly) -> XPoly:
    """
    The unique q with a * q = p for a bijective on K[x].

    With V = K[x]_{<=d} (d = deg_F) and U the span of x^[s], s > d, the
    U-component is sum_i (-1)^i (a0^-1 a_-)^i a0^-1 p_U, a terminating series
    because a_- lowers degree; the V-component comes from the finite block.
    """
    if is_compact(a) or not classify_structural(a).bijective:
        raise DomainError("not invertible on K[x]")
    d = deg_F(a)
    a0 = a.coefficient(0)
    lowering = [(k, b) for k, b in a.graded if k < 0]
    coords = p.to_divided()

    q_upper: dict[int, Fraction] = defaultdict(Fraction)
    term = {s: c / a0(s + 1) for s, c in enumerate(coords) if s > d and c}
    while term:
        for s, c in term.items():
            q_upper[s] += c
        lowered: dict[int, Fraction] = defaultdict(Fraction)
        for s, c in term.items():
            for k, b in lowering:
                t = s + k
                if t > d:
                    lowered[t] += c * b(t + 1)
        term = {t: -v / a0(t + 1) for t, v in lowered.items() if v}

    size = max(q_upper, default=-1) + 1
    upper = XPoly.from_divided([q_upper.get(s, Fraction(0)) for s in range(size)])
    result = upper
    if d >= 0:
        image = apply(a, upper).to_divided()
        residual = [
            (coords[t] if t < len(coords) else 0) - (image[t] if t < len(image) else 0)
            for t in range(d + 1)
        ]
        lower = linalg.solve(_block(a, d + 1, d + 1), d + 1, residual)
        if lower is None:
            raise CertificationError("finite block of a bijective operator is singular")
        result = upper + XPoly.from_divided(lower)

    if apply(a, result) != p:
        raise CertificationError("inverse failed the residual check")
    return result


def solve(a: Operator, p: XPoly, *, window: int | None = None) -> SolutionSet:
    """All q with a * q = p, as particular solution plus kernel basis."""
    if is_compact(a):
        raise DomainError("solving is not supported for compact operators")
    if classify_structural(a).bijective:
        return SolutionSet(particular=apply_inverse(a, p), homogeneous_basis=[])

    report = analyze(a, window=window)
    top = support_bounds(a)[1]
    degree = len(p.coeffs) - 1
    cols = max(report.window_used + 1, degree - top + 1, 1)
    matrix = truncation(a, cols)
    rows = max(matrix.rows, degree + 1)
    rhs = p.to_divided() + [Fraction(0)] * (rows - len(p.coeffs))
    logger.debug("solve: %d x %d system", rows, cols)

    solution = linalg.solve(matrix.padded(rows), cols, rhs)
    if solution is None:
        return SolutionSet(particular=None, homogeneous_basis=report.kernel_basis)
    particular = XPoly.from_divided(solution)
    if apply(a, particular) != p:
        raise CertificationError("particular solution failed the residual check")
    return SolutionSet(particular=particular, homogeneous_basis=report.kernel_basis)


def index_factorization(a: Operator) -> IndexFactorization:
    """Split off D^i (i >= 0) on the left or I^|i| on the right, leaving index 0."""
    i = index(a)
    if i >= 0:
        shifted = mul(i_power(i), a)
        factor = Operator(shifted.graded, FPart(tuple(
            (key, c) for key, c in shifted.fpart.entries if key[0] >= i
        )))
        side = "left"
        ok = mul(d_power(i), factor) == a
    else:
        n = -i
        shifted = mul(a, d_power(n))
        factor = Operator(shifted.graded, FPart(tuple(
            (key, c) for key, c in shifted.fpart.entries if key[1] >= n
        )))
        side = "right"
        ok = mul(factor, i_power(n)) == a
    if not ok or index(factor) != 0:
        raise CertificationError("index factorization failed its check")
    return IndexFactorization(index=i, side=side, factor=factor)


# =============================================================================
# Regularizers and kernel projections
# =============================================================================

def _permutation_unit(mapping: dict[int, int]) -> tuple[Operator, Operator]:
    """(s, s^-1) for the unit permuting x^[j] -> x^[mapping[j]] on moved indices."""
    forward = {}
    backward = {}
    for j, image in mapping.items():
        forward[(image, j)] = Fraction(1)
        forward[(j, j)] = forward.get((j, j), Fraction(0)) - 1
        backward[(j, image)] = Fraction(1)
        backward[(image, image)] = backward.get((image, image), Fraction(0)) - 1
    return ONE + Operator.build(fpart=forward), ONE + Operator.build(fpart=backward)


def _block_unit(columns: list[list[Fraction]]) -> tuple[Operator, Operator]:
    """(s, s^-1) for the unit whose top-left block has the given columns."""
    size = len(columns)
    matrix = [[columns[c][r] for c in range(size)] for r in range(size)]
    inverse = linalg.inverse(matrix)

    def as_unit(block: list[list[Fraction]]) -> Operator:
        entries = {
            (r, c): block[r][c] - (1 if r == c else 0)
            for r in range(size) for c in range(size)
        }
        return ONE + Operator.build(fpart=entries)

    return as_unit(matrix), as_unit(inverse)


def _left_regularized(c: Operator, a: Operator, report: AnalysisReport) -> bool:
    result = analyze(mul(c, a))
    return result.surjective and result.kernel_basis == report.kernel_basis


def _right_regularized(c: Operator, a: Operator, report: AnalysisReport) -> bool:
    result = analyze(mul(a, c))
    return result.injective and result.cokernel_basis == report.cokernel_basis


def left_regularizer(a: Operator) -> Operator:
    """c = D^n + f with c*a surjective and ker(c*a) = ker(a), n = dim coker(a)."""
    _require_fredholm(a, "left regularizer needs a Fredholm operator")
    report = analyze(a)
    n = len(report.cokernel_basis)
    if n == 0:
        return ONE
    candidate = d_power(n)
    if _left_regularized(candidate, a, report):
        return candidate

    # conjugate D^n by a unit carrying ker(D^n) onto the cokernel span
    targets = [len(r.coeffs) - 1 for r in report.cokernel_basis]
    mapping = dict(zip(range(n), targets))
    incoming = [t for t in targets if t >= n]
    freed = [k for k in range(n) if k not in targets]
    mapping.update(zip(incoming, freed))
    mapping = {j: image for j, image in mapping.items() if j != image}
    s, s_inv = _permutation_unit(mapping)
    candidate = mul(mul(s, d_power(n)), s_inv)
    logger.debug("left_regularizer: conjugated D^%d by permutation %s", n, mapping)
    if not _left_regularized(candidate, a, report):
        raise CertificationError("left regularizer failed its check")
    return candidate


def right_regularizer(a: Operator) -> Operator:
    """c = I^m + g with a*c injective and im(a*c) = im(a), m = dim ker(a)."""
    _require_fredholm(a, "right regularizer needs a Fredholm operator")
    report = analyze(a)
    m = len(report.kernel_basis)
    if m == 0:
        return ONE
    candidate = i_power(m)
    if _right_regularized(candidate, a, report):
        return candidate

    # conjugate I^m by a unit carrying ker(D^m) onto ker(a)
    kernel = [q.to_divided() for q in report.kernel_basis]
    size = max(max(len(v) for v in kernel), m)
    columns = [v + [Fraction(0)] * (size - len(v)) for v in kernel]
    for t in range(size):
        if len(columns) == size:
            break
        standard = [Fraction(1 if r == t else 0) for r in range(size)]
        if linalg.rank(columns + [standard], size) == len(columns) + 1:
            columns.append(standard)
    s, s_inv = _block_unit(columns)
    candidate = mul(mul(s, i_power(m)), s_inv)
    logger.debug("right_regularizer: completed kernel block of size %d", size)
    if not _right_regularized(candidate, a, report):
        raise CertificationError("right regularizer failed its check")
    return candidate


def kernel_idempotent(a: Operator) -> Operator:
    """Idempotent f in F with im(f) = ker(a), projecting along the non-leading monomials."""
    _require_fredholm(a, "kernel projection needs a Fredholm operator")
    entries: dict[tuple[int, int], Fraction] = {}
    for q in analyze(a).kernel_basis:
        vector = q.to_divided()
        lead = len(vector) - 1
        for t, c in enumerate(vector):
            if c:
                entries[(t, lead)] = c / vector[lead]
    f = Operator.build(fpart=entries)
    if mul(f, f) != f:
        raise CertificationError("kernel projection is not idempotent")
    return f
