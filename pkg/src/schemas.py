"""
Result models and JSON codecs for the integro-differential calculator.

This module defines:
- Annotated field types mapping Fraction / HPoly / XPoly / Operator / B1Element
  to their documented JSON form (rationals as "p/q" strings)
- Pydantic models returned by the library operations (reports, witnesses,
  centralizer descriptions) and used verbatim for --json output
"""

from fractions import Fraction
from typing import Annotated, Any, List, Literal, Optional

from pydantic import BaseModel, BeforeValidator, ConfigDict, Field, PlainSerializer

from .algebra.bquot import B1Element
from .algebra.exactmath import HPoly, XPoly, scalar_str, to_scalar
from .algebra.opcore import FPart, Operator


# =============================================================================
# Codecs
# =============================================================================

def poly_to_json(p: HPoly | XPoly) -> list[str]:
    return [scalar_str(c) for c in p.coeffs]


def _poly_from_json(cls):
    def convert(value: Any):
        if isinstance(value, cls):
            return value
        if isinstance(value, (list, tuple)):
            return cls(tuple(to_scalar(c) for c in value))
        raise ValueError(f"expected a coefficient array for {cls.__name__}")
    return convert


def operator_to_json(a: Operator) -> dict:
    return {
        "graded": [{"deg": k, "poly": poly_to_json(b)} for k, b in a.graded],
        "fpart": [{"i": i, "j": j, "c": scalar_str(c)} for (i, j), c in a.fpart.entries],
    }


def operator_from_json(value: Any) -> Operator:
    if isinstance(value, Operator):
        return value
    if not isinstance(value, dict):
        raise ValueError("expected an operator object")
    graded = tuple(
        (int(term["deg"]), HPoly(tuple(to_scalar(c) for c in term["poly"])))
        for term in value.get("graded", [])
    )
    fpart = FPart(tuple(
        ((int(entry["i"]), int(entry["j"])), to_scalar(entry["c"]))
        for entry in value.get("fpart", [])
    ))
    return Operator(graded, fpart)


def b1_to_json(b: B1Element) -> dict:
    return {"coeffs": [{"deg": k, "poly": poly_to_json(p)} for k, p in b.coeffs]}


def b1_from_json(value: Any) -> B1Element:
    if isinstance(value, B1Element):
        return value
    if not isinstance(value, dict):
        raise ValueError("expected a B1 element object")
    return B1Element(tuple(
        (int(term["deg"]), HPoly(tuple(to_scalar(c) for c in term["poly"])))
        for term in value.get("coeffs", [])
    ))


RationalField = Annotated[
    Fraction, BeforeValidator(to_scalar), PlainSerializer(scalar_str, return_type=str)
]
XPolyField = Annotated[
    XPoly, BeforeValidator(_poly_from_json(XPoly)), PlainSerializer(poly_to_json, return_type=list)
]
HPolyField = Annotated[
    HPoly, BeforeValidator(_poly_from_json(HPoly)), PlainSerializer(poly_to_json, return_type=list)
]
OperatorField = Annotated[
    Operator, BeforeValidator(operator_from_json), PlainSerializer(operator_to_json, return_type=dict)
]
B1Field = Annotated[
    B1Element, BeforeValidator(b1_from_json), PlainSerializer(b1_to_json, return_type=dict)
]


class _Frozen(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)


# =============================================================================
# Action on K[x]
# =============================================================================

class TruncationModel(_Frozen):
    """Finite window of the matrix of an operator in the divided basis."""

    rows: int = Field(description="Number of rows R")
    cols: int = Field(description="Number of columns C")
    entries: List[List[RationalField]] = Field(
        description="Entry (t, s) is the coefficient of x^[t] in a*x^[s]"
    )


class AnalysisReport(_Frozen):
    """Index, kernel and cokernel of an operator acting on K[x]."""

    index: int = Field(description="dim ker - dim coker")
    kernel_basis: List[XPolyField] = Field(
        description="Reduced echelon basis of the kernel, monic, ascending degree"
    )
    cokernel_basis: List[XPolyField] = Field(
        description="Monomials spanning a complement of the image"
    )
    injective: bool
    surjective: bool
    bijective: bool
    window_used: int = Field(description="Certified column window W")


class StructuralFlags(_Frozen):
    """Classification computed from the block and integer-root criteria."""

    injective: bool
    surjective: bool
    bijective: bool

    def as_tuple(self) -> tuple[bool, bool, bool]:
        return self.injective, self.surjective, self.bijective


class SolutionSet(_Frozen):
    """Affine solution space of a*q = p."""

    particular: Optional[XPolyField] = Field(
        default=None, description="Present iff p lies in the image"
    )
    homogeneous_basis: List[XPolyField] = Field(default_factory=list)


class IndexFactorization(_Frozen):
    """a = D^i * a' (index i >= 0) or a = a' * I^|i| (index i < 0), with ind(a') = 0."""

    index: int
    side: Literal["left", "right"] = Field(
        description="left: a = D^i a'; right: a = a' I^|i|"
    )
    factor: OperatorField


# =============================================================================
# Units and one-sided inverses
# =============================================================================

class OneSidedWitness(_Frozen):
    """Factorization witnessing left or right invertibility."""

    kind: Literal["left", "right"]
    n: int = Field(description="|index| of the input")
    unit_factor: OperatorField = Field(description="Unit u with a = u I^n or b = D^n u")
    inverse: OperatorField = Field(description="Verified one-sided inverse")


class RegularityFlags(_Frozen):
    left_regular: bool = Field(description="star(a) injective on K[x]")
    right_regular: bool = Field(description="a injective on K[x]")
    regular: bool

    def as_tuple(self) -> tuple[bool, bool, bool]:
        return self.left_regular, self.right_regular, self.regular


# =============================================================================
# Centralizers
# =============================================================================

CentralizerKind = Literal["D1_plus_pairs", "poly_in_D", "poly_in_I", "poly_in_X", "truncated"]


class CentralizerDescription(_Frozen):
    """Symbolic or truncated description of a centralizer."""

    kind: CentralizerKind
    pair_basis: List[tuple[int, int]] = Field(
        default_factory=list,
        description="Index pairs (s-1, t-1) of units e_{s-1,t-1}; transposes implied",
    )
    basis: List[OperatorField] = Field(
        default_factory=list, description="Explicit basis (truncated kind)"
    )
    window: Optional[int] = Field(default=None, description="N for truncated descriptions")

    def symbolic(self) -> str:
        """Human form, e.g. "D1 + K*e[1,0] + K*e[0,1]"."""
        match self.kind:
            case "poly_in_D":
                return "K[D]"
            case "poly_in_I":
                return "K[I]"
            case "poly_in_X":
                return "K[x]"
            case "D1_plus_pairs":
                parts = ["D1"]
                for i, j in self.pair_basis:
                    parts.append(f"K*e[{i},{j}]")
                    parts.append(f"K*e[{j},{i}]")
                return " + ".join(parts)
        return f"span of {len(self.basis)} element(s) of F within window {self.window}"


# =============================================================================
# B1 quotient
# =============================================================================

class NormalizationResult(_Frozen):
    """(alpha, beta, b') with b' = beta * b * alpha^-1 normal."""

    alpha: HPolyField
    beta: HPolyField
    normal: B1Field
