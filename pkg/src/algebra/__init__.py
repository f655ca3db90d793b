"""
Exact algebra of polynomial integro-differential operators over Q.

The package namespace carries the ring itself (polynomials, canonical forms,
the text language and the quotient B1); analysis lives in the action, units
and centralizer submodules, which build on src.schemas.
"""

from .exactmath import HPoly, XPoly, integer_roots
from .opcore import (
    DIFF,
    H_OP,
    INTEG,
    ONE,
    X_OP,
    ZERO,
    Operator,
    add,
    commutator,
    d_power,
    deg_F,
    e_unit,
    i_power,
    is_compact,
    mul,
    star,
    support_bounds,
    trace_F,
    x_power,
)
from .lang import format_b1, format_operator, parse, parse_b1, parse_hpoly, parse_xpoly

# Quotient by the compact ideal
from .bquot import B1Element, b1_mul, project

__all__ = [
    # Polynomials
    "HPoly",
    "XPoly",
    "integer_roots",
    # Canonical forms
    "Operator",
    "ZERO",
    "ONE",
    "DIFF",
    "INTEG",
    "H_OP",
    "X_OP",
    "d_power",
    "i_power",
    "x_power",
    "e_unit",
    "add",
    "mul",
    "commutator",
    "star",
    "deg_F",
    "is_compact",
    "support_bounds",
    "trace_F",
    # Text form
    "parse",
    "parse_xpoly",
    "parse_hpoly",
    "parse_b1",
    "format_operator",
    "format_b1",
    # B1 = I1 / F
    "B1Element",
    "project",
    "b1_mul",
]
