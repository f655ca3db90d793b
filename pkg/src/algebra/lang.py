"""
Expression language - parser and printer for operators and polynomials.

Grammar (juxtaposition is not multiplication):

    expr     := term (("+" | "-") term)*
    term     := factor ("*" factor)*
    factor   := ["-"] base ["^" nat]
    base     := "D" | "I" | "H" | "x" | "e" "[" nat "," nat "]" | rational | "(" expr ")"
    rational := int ["/" nat]

The parser builds an ExprAST first; the same tree evaluates either to an
Operator or, for polynomial arguments, to an HPoly/XPoly. Elements of the
quotient B1 use the same grammar with integer exponents ("D^-2").
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Union

import pyparsing as pp

from ..errors import ExpressionSyntaxError
from .bquot import B1_ONE, B1Element, b1_mul, b1_power, project
from .exactmath import DensePoly, HPoly, P, XPoly, join_signed_terms, scalar_str
from .opcore import DIFF, H_OP, INTEG, ONE, X_OP, Operator, e_unit, mul, power


# =============================================================================
# AST
# =============================================================================

@dataclass(frozen=True)
class Atom:
    kind: str  # "D", "I", "H", "x", "e" or "rational"
    value: Fraction | tuple[int, int] | None = None


@dataclass(frozen=True)
class Power:
    base: "Node"
    exponent: int


@dataclass(frozen=True)
class Negation:
    node: "Node"


@dataclass(frozen=True)
class Product:
    factors: tuple["Node", ...]


@dataclass(frozen=True)
class Sum:
    terms: tuple["Node", ...]


Node = Union[Atom, Power, Negation, Product, Sum]


# =============================================================================
# Grammar
# =============================================================================

def _exponent_action(s: str, loc: int, toks: pp.ParseResults) -> int:
    text = toks[0]
    if text.startswith(("-", "+")) or "/" in text:
        raise pp.ParseFatalException(s, loc, f"negative or fractional exponent '{text}'")
    return int(text)


def _laurent_exponent_action(s: str, loc: int, toks: pp.ParseResults) -> int:
    text = toks[0]
    if "/" in text:
        raise pp.ParseFatalException(s, loc, f"fractional exponent '{text}'")
    return int(text)


def _index_action(s: str, loc: int, toks: pp.ParseResults) -> int:
    text = toks[0]
    if text.startswith("-"):
        raise pp.ParseFatalException(s, loc, f"negative matrix-unit index '{text}'")
    return int(text)


def _rational_action(s: str, loc: int, toks: pp.ParseResults) -> Atom:
    text = toks[0]
    if "/" in text and int(text.split("/")[1]) == 0:
        raise pp.ParseFatalException(s, loc, "zero denominator")
    return Atom("rational", Fraction(text))


def _factor_action(toks: pp.ParseResults) -> Node:
    items = list(toks)
    negate = isinstance(items[0], str) and items[0] == "-"
    if negate:
        items = items[1:]
    node: Node = items[0]
    if len(items) == 2:
        node = Power(node, items[1])
    return Negation(node) if negate else node


def _product_action(toks: pp.ParseResults) -> Node:
    factors = tuple(toks)
    return factors[0] if len(factors) == 1 else Product(factors)


def _sum_action(toks: pp.ParseResults) -> Node:
    items = list(toks)
    terms: list[Node] = [items[0]]
    for sign, node in zip(items[1::2], items[2::2]):
        terms.append(Negation(node) if sign == "-" else node)
    return terms[0] if len(terms) == 1 else Sum(tuple(terms))


@lru_cache(maxsize=2)
def grammar(laurent: bool = False) -> pp.ParserElement:
    """The expression grammar; laurent=True admits negative integer exponents."""
    expr = pp.Forward()

    exponent = pp.Regex(r"[+-]?\d+(?:/\d+)?").set_parse_action(
        _laurent_exponent_action if laurent else _exponent_action
    )
    index = pp.Regex(r"[+-]?\d+").set_parse_action(_index_action)
    rational = pp.Regex(r"\d+(?:/\d+)?").set_parse_action(_rational_action)

    unit = (
        pp.Suppress(pp.Keyword("e"))
        + pp.Suppress("[") + index + pp.Suppress(",") + index + pp.Suppress("]")
    ).set_parse_action(lambda t: Atom("e", (t[0], t[1])))
    letter = (
        pp.Keyword("D") | pp.Keyword("I") | pp.Keyword("H") | pp.Keyword("x")
    ).set_parse_action(lambda t: Atom(t[0]))

    base = unit | letter | rational | (pp.Suppress("(") + expr + pp.Suppress(")"))
    factor = (
        pp.Optional(pp.Literal("-")) + base + pp.Optional(pp.Suppress("^") + exponent)
    ).set_parse_action(_factor_action)
    term = (factor + pp.ZeroOrMore(pp.Suppress("*") + factor)).set_parse_action(_product_action)
    expr <<= (term + pp.ZeroOrMore(pp.one_of("+ -") + term)).set_parse_action(_sum_action)
    return expr


def parse_ast(text: str, *, laurent: bool = False) -> Node:
    """Parse text into an ExprAST, raising ExpressionSyntaxError with line/column."""
    try:
        return grammar(laurent).parse_string(text, parse_all=True)[0]
    except pp.ParseBaseException as exc:
        raise ExpressionSyntaxError(exc.msg, text, exc.lineno, exc.col) from None


# =============================================================================
# Evaluation
# =============================================================================

_LETTERS = {"D": DIFF, "I": INTEG, "H": H_OP, "x": X_OP}


def evaluate(node: Node) -> Operator:
    """Fold an ExprAST into the canonical form of the denoted operator."""
    match node:
        case Atom(kind="rational", value=value):
            return Operator.scalar(value)
        case Atom(kind="e", value=(i, j)):
            return e_unit(i, j)
        case Atom(kind=kind):
            return _LETTERS[kind]
        case Power(base=base, exponent=exponent):
            return power(evaluate(base), exponent)
        case Negation(node=inner):
            return -evaluate(inner)
        case Product(factors=factors):
            result = ONE
            for factor in factors:
                result = mul(result, evaluate(factor))
            return result
        case Sum(terms=terms):
            result = evaluate(terms[0])
            for term in terms[1:]:
                result = result + evaluate(term)
            return result
    raise TypeError(f"unknown node {node!r}")


def evaluate_poly(node: Node, cls: type[P]) -> P:
    """Fold an ExprAST into a polynomial in cls.VARIABLE; other atoms are rejected."""
    match node:
        case Atom(kind="rational", value=value):
            return cls.constant(value)
        case Atom(kind=kind) if kind == cls.VARIABLE:
            return cls.variable()
        case Atom(kind=kind):
            raise ExpressionSyntaxError(f"'{kind}' is not allowed in a polynomial in {cls.VARIABLE}")
        case Power(base=base, exponent=exponent):
            return evaluate_poly(base, cls) ** exponent
        case Negation(node=inner):
            return -evaluate_poly(inner, cls)
        case Product(factors=factors):
            result = cls.one()
            for factor in factors:
                result = result * evaluate_poly(factor, cls)
            return result
        case Sum(terms=terms):
            result = cls()
            for term in terms:
                result = result + evaluate_poly(term, cls)
            return result
    raise TypeError(f"unknown node {node!r}")


_B1_LETTERS = {
    "D": B1Element.d_power(1),
    "I": B1Element.d_power(-1),
    "H": B1Element.hpoly(HPoly.variable()),
    "x": project(X_OP),
}


def evaluate_b1(node: Node) -> B1Element:
    """Fold an ExprAST into B1; I reads as D^-1 and matrix units vanish."""
    match node:
        case Atom(kind="rational", value=value):
            return B1Element.scalar(value)
        case Atom(kind="e"):
            return B1Element()
        case Atom(kind=kind):
            return _B1_LETTERS[kind]
        case Power(base=base, exponent=exponent):
            return b1_power(evaluate_b1(base), exponent)
        case Negation(node=inner):
            return -evaluate_b1(inner)
        case Product(factors=factors):
            result = B1_ONE
            for factor in factors:
                result = b1_mul(result, evaluate_b1(factor))
            return result
        case Sum(terms=terms):
            result = B1Element()
            for term in terms:
                result = result + evaluate_b1(term)
            return result
    raise TypeError(f"unknown node {node!r}")


def parse(text: str) -> Operator:
    """Parse an operator expression, e.g. "I*D" -> 1 - e[0,0]."""
    return evaluate(parse_ast(text))


def parse_xpoly(text: str) -> XPoly:
    return evaluate_poly(parse_ast(text), XPoly)


def parse_hpoly(text: str) -> HPoly:
    return evaluate_poly(parse_ast(text), HPoly)


def parse_b1(text: str) -> B1Element:
    """Parse an element of B1, e.g. "D^-1*(H - 1) + H - 3"."""
    return evaluate_b1(parse_ast(text, laurent=True))


# =============================================================================
# Printing
# =============================================================================

def _power_word(k: int) -> str:
    letter = "I" if k > 0 else "D"
    return letter if abs(k) == 1 else f"{letter}^{abs(k)}"


def _graded_terms(k: int, b: HPoly) -> list[str]:
    if k == 0:
        return _poly_terms(b)
    word = _power_word(k)
    if b.is_constant:
        c = b.leading
        if c == 1:
            return [word]
        if c == -1:
            return [f"-{word}"]
        return [f"{scalar_str(c)}*{word}"]
    nonzero = [i for i, c in enumerate(b.coeffs) if c != 0]
    if len(nonzero) == 1:
        return [f"{_poly_terms(b)[0]}*{word}"]
    if b.leading < 0:
        return [f"-({(-b).render()})*{word}"]
    return [f"({b.render()})*{word}"]


def _poly_terms(p: DensePoly) -> list[str]:
    # render() joins with " + "/" - "; split back into signed terms
    return p.render().replace(" - ", " + -").split(" + ")


def _unit_term(i: int, j: int, c: Fraction) -> str:
    unit = f"e[{i},{j}]"
    if c == 1:
        return unit
    if c == -1:
        return f"-{unit}"
    return f"{scalar_str(c)}*{unit}"


def format_operator(a: Operator) -> str:
    """Grammar-valid text whose parse is a again; "0" for the zero operator."""
    ordered = sorted(a.graded, key=lambda item: (abs(item[0]), item[0]))
    terms: list[str] = []
    for k, b in ordered:
        terms.extend(_graded_terms(k, b))
    terms.extend(_unit_term(i, j, c) for (i, j), c in a.fpart.entries)
    return join_signed_terms(terms)


def _b1_term(k: int, p: HPoly) -> list[str]:
    if k == 0:
        return _poly_terms(p)
    word = "D" if k == 1 else f"D^{k}"
    sign = ""
    if p.leading < 0:
        sign, p = "-", -p
    if p.is_constant:
        return [f"{sign}{word}" if p.leading == 1 else f"{sign}{scalar_str(p.leading)}*{word}"]
    nonzero = [i for i, c in enumerate(p.coeffs) if c != 0]
    body = p.render() if len(nonzero) == 1 else f"({p.render()})"
    return [f"{sign}{word}*{body}"]


def format_b1(b: B1Element) -> str:
    """Right-coefficient text D^k*(P), ascending in k; parse_b1 reads it back."""
    terms: list[str] = []
    for k, p in b.coeffs:
        terms.extend(_b1_term(k, p))
    return join_signed_terms(terms)
