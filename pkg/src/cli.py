"""
Command-line front end: one verb per library operation.

    intdiff [--json] [--window N] [--samples K] VERB ARGS...

Exit codes: 0 success, 1 domain or certification error, 2 parse or usage error.
"""

import json
import logging
import sys
from dataclasses import dataclass
from typing import Any

import click

from .algebra import action, bquot, centralizer, units
from .algebra.bquot import B1Element
from .algebra.exactmath import HPoly, XPoly, integer_roots, irreducible_factors, scalar_str
from .algebra.lang import format_b1, format_operator, parse, parse_b1, parse_hpoly, parse_xpoly
from .algebra.opcore import Operator, add, deg_F, graded_component, mul, star, support_bounds, trace_F
from .config import LOG_FORMAT, Settings, load_settings
from .errors import CertificationError, ConfigurationError, DomainError, ExpressionSyntaxError
from .render import render, render_model
from .schemas import (
    CentralizerDescription,
    b1_to_json,
    operator_to_json,
    poly_to_json,
)


# =============================================================================
# Argument types
# =============================================================================

class ExpressionType(click.ParamType):
    """Click parameter parsed by one of the lang entry points."""

    def __init__(self, name: str, parser):
        self.name = name
        self._parser = parser

    def convert(self, value: Any, param, ctx):
        if not isinstance(value, str):
            return value
        try:
            return self._parser(value)
        except ExpressionSyntaxError as exc:
            self.fail(f"cannot parse {value!r}: {exc}", param, ctx)


OPERATOR = ExpressionType("operator", parse)
XPOLY = ExpressionType("polynomial in x", parse_xpoly)
HPOLY = ExpressionType("polynomial in H", parse_hpoly)
B1 = ExpressionType("element of B1", parse_b1)


class CommandFailed(click.ClickException):
    """A library error surfaced with its message and a fixed exit code."""

    def __init__(self, message: str, exit_code: int):
        super().__init__(message)
        self.exit_code = exit_code


class CalculatorGroup(click.Group):
    """Maps library exceptions onto the documented exit codes."""

    def invoke(self, ctx: click.Context):
        try:
            return super().invoke(ctx)
        except (DomainError, CertificationError) as exc:
            raise CommandFailed(str(exc), 1) from exc
        except (ExpressionSyntaxError, ConfigurationError) as exc:
            raise CommandFailed(str(exc), 2) from exc


@dataclass
class Options:
    as_json: bool
    window: int | None
    samples: int | None
    settings: Settings


# =============================================================================
# Output helpers
# =============================================================================

def _emit(options: Options, text: str, payload: Any) -> None:
    if options.as_json:
        click.echo(json.dumps(payload, indent=options.settings.json_indent))
    else:
        click.echo(text)


def _emit_operator(options: Options, a: Operator) -> None:
    _emit(options, format_operator(a), operator_to_json(a))


def _emit_model(options: Options, template: str, model, **extra) -> None:
    _emit(options, render_model(template, model, **extra), model.model_dump(mode="json"))


def _emit_flags(options: Options, model) -> None:
    flags = model.model_dump()
    _emit(options, render("flags.txt.j2", flags=flags.items()), flags)


def _emit_bool(options: Options, value: bool) -> None:
    _emit(options, "yes" if value else "no", value)


# =============================================================================
# Group
# =============================================================================

@click.group(cls=CalculatorGroup)
@click.option("--json", "as_json", is_flag=True, help="Machine-readable output")
@click.option("--window", type=click.IntRange(min=0), default=None,
              help="Window override for analyze, solve and commutant")
@click.option("--samples", type=click.IntRange(min=1), default=None,
              help="Number of samples for linvset")
@click.version_option(package_name="intdiff-calculator", message="%(version)s")
@click.pass_context
def main(ctx: click.Context, as_json: bool, window: int | None, samples: int | None) -> None:
    """Exact calculator for polynomial integro-differential operators over Q."""
    try:
        settings = load_settings()
    except ConfigurationError as exc:
        raise CommandFailed(str(exc), 2) from exc
    logging.basicConfig(level=settings.logging_level(), format=LOG_FORMAT, stream=sys.stderr)
    ctx.obj = Options(as_json=as_json, window=window, samples=samples, settings=settings)


pass_options = click.make_pass_decorator(Options)


# =============================================================================
# Canonical forms and arithmetic
# =============================================================================

@main.command()
@click.argument("a", type=OPERATOR)
@pass_options
def canon(options: Options, a: Operator) -> None:
    """Canonical form of A."""
    _emit_operator(options, a)


@main.command("add")
@click.argument("a", type=OPERATOR)
@click.argument("b", type=OPERATOR)
@pass_options
def add_command(options: Options, a: Operator, b: Operator) -> None:
    """A + B."""
    _emit_operator(options, add(a, b))


@main.command("mul")
@click.argument("a", type=OPERATOR)
@click.argument("b", type=OPERATOR)
@pass_options
def mul_command(options: Options, a: Operator, b: Operator) -> None:
    """A * B."""
    _emit_operator(options, mul(a, b))


@main.command("star")
@click.argument("a", type=OPERATOR)
@pass_options
def star_command(options: Options, a: Operator) -> None:
    """The involution D <-> I."""
    _emit_operator(options, star(a))


@main.command()
@click.argument("a", type=OPERATOR)
@pass_options
def degf(options: Options, a: Operator) -> None:
    """Largest matrix-unit index in the finite part, -1 if there is none."""
    value = deg_F(a)
    _emit(options, str(value), value)


@main.command()
@click.argument("f", type=OPERATOR)
@pass_options
def trace(options: Options, f: Operator) -> None:
    """Trace of a finite-rank element."""
    value = trace_F(f)
    _emit(options, scalar_str(value), scalar_str(value))


@main.command()
@click.argument("a", type=OPERATOR)
@pass_options
def bounds(options: Options, a: Operator) -> None:
    """Lowest and highest graded degree."""
    low, high = support_bounds(a)
    _emit(options, f"{low} {high}", [low, high])


@main.command()
@click.argument("a", type=OPERATOR)
@click.argument("k", type=int)
@pass_options
def component(options: Options, a: Operator, k: int) -> None:
    """Homogeneous component of degree K."""
    _emit_operator(options, graded_component(a, k))


# =============================================================================
# Action on K[x]
# =============================================================================

@main.command("apply")
@click.argument("a", type=OPERATOR)
@click.argument("p", type=XPOLY)
@pass_options
def apply_command(options: Options, a: Operator, p: XPoly) -> None:
    """A applied to the polynomial P."""
    q = action.apply(a, p)
    _emit(options, q.render(), poly_to_json(q))


@main.command()
@click.argument("a", type=OPERATOR)
@click.argument("cols", type=click.IntRange(min=0))
@pass_options
def truncate(options: Options, a: Operator, cols: int) -> None:
    """First COLS columns of the matrix of A on the divided basis."""
    _emit_model(options, "truncation.txt.j2", action.truncation(a, cols).to_model())


@main.command("index")
@click.argument("a", type=OPERATOR)
@pass_options
def index_command(options: Options, a: Operator) -> None:
    """dim ker - dim coker on K[x]."""
    value = action.index(a)
    _emit(options, str(value), value)


@main.command()
@click.argument("a", type=OPERATOR)
@pass_options
def analyze(options: Options, a: Operator) -> None:
    """Index, kernel and cokernel on K[x]."""
    report = action.analyze(
        a, window=options.window, max_doublings=options.settings.max_window_doublings
    )
    _emit_model(options, "analysis.txt.j2", report)


@main.command()
@click.argument("a", type=OPERATOR)
@pass_options
def classify(options: Options, a: Operator) -> None:
    """Injective / surjective / bijective from the structural criteria."""
    _emit_flags(options, action.classify_structural(a))


@main.command("solve")
@click.argument("a", type=OPERATOR)
@click.argument("p", type=XPOLY)
@pass_options
def solve_command(options: Options, a: Operator, p: XPoly) -> None:
    """All polynomials q with A q = P."""
    solution = action.solve(a, p, window=options.window)
    _emit_model(options, "solution.txt.j2", solution, rhs=p, operator=a)


@main.command()
@click.argument("a", type=OPERATOR)
@click.argument("p", type=XPOLY)
@pass_options
def invapply(options: Options, a: Operator, p: XPoly) -> None:
    """A^-1 P for A bijective on K[x]."""
    q = action.apply_inverse(a, p)
    _emit(options, q.render(), poly_to_json(q))


@main.command()
@click.argument("a", type=OPERATOR)
@pass_options
def indexfactor(options: Options, a: Operator) -> None:
    """A = D^i A' or A = A' I^|i| with A' of index zero."""
    _emit_model(options, "factorization.txt.j2", action.index_factorization(a))


@main.command()
@click.argument("a", type=OPERATOR)
@pass_options
def leftreg(options: Options, a: Operator) -> None:
    """c with c*A surjective and the same kernel as A."""
    _emit_operator(options, action.left_regularizer(a))


@main.command()
@click.argument("a", type=OPERATOR)
@pass_options
def rightreg(options: Options, a: Operator) -> None:
    """c with A*c injective and the same image as A."""
    _emit_operator(options, action.right_regularizer(a))


@main.command()
@click.argument("a", type=OPERATOR)
@pass_options
def kerproj(options: Options, a: Operator) -> None:
    """Idempotent of finite rank whose image is ker(A)."""
    _emit_operator(options, action.kernel_idempotent(a))


# =============================================================================
# Units and one-sided inverses
# =============================================================================

def _emit_witness(options: Options, witness) -> None:
    if witness is None:
        _emit(options, "none", None)
    else:
        _emit_model(options, "witness.txt.j2", witness)


@main.command()
@click.argument("a", type=OPERATOR)
@pass_options
def leftinv(options: Options, a: Operator) -> None:
    """A left inverse of A, or none."""
    _emit_witness(options, units.left_inverse(a))


@main.command()
@click.argument("b", type=OPERATOR)
@pass_options
def rightinv(options: Options, b: Operator) -> None:
    """A right inverse of B, or none."""
    _emit_witness(options, units.right_inverse(b))


@main.command()
@click.argument("a", type=OPERATOR)
@click.argument("k", type=click.IntRange(min=1), required=False)
@pass_options
def linvset(options: Options, a: Operator, k: int | None) -> None:
    """K distinct left inverses of A."""
    count = k or options.samples or options.settings.linvset_samples
    samples = units.left_inverse_set_sample(a, count)
    _emit(
        options,
        "\n".join(format_operator(s) for s in samples),
        [operator_to_json(s) for s in samples],
    )


@main.command()
@click.argument("a", type=OPERATOR)
@pass_options
def det(options: Options, a: Operator) -> None:
    """Determinant of an element of K + F."""
    value = units.det_KF(a)
    _emit(options, scalar_str(value), scalar_str(value))


@main.command()
@click.argument("a", type=OPERATOR)
@pass_options
def isunit(options: Options, a: Operator) -> None:
    """Whether A is a unit of I1."""
    _emit_bool(options, units.is_unit(a))


@main.command()
@click.argument("u", type=OPERATOR)
@pass_options
def unitinv(options: Options, u: Operator) -> None:
    """Inverse of a unit."""
    _emit_operator(options, units.unit_inverse(u))


@main.command()
@click.argument("u", type=OPERATOR)
@click.argument("n", type=click.IntRange(min=0))
@pass_options
def kappa(options: Options, u: Operator, n: int) -> None:
    """kappa^N(U) for U in K + F."""
    _emit_operator(options, units.kappa_shift(u, n))


@main.command("regularity")
@click.argument("a", type=OPERATOR)
@pass_options
def regularity_command(options: Options, a: Operator) -> None:
    """Left, right and two-sided regularity."""
    _emit_flags(options, units.regularity(a))


@main.command()
@click.argument("a", type=OPERATOR)
@click.argument("n", type=click.IntRange(min=0), required=False)
@pass_options
def criterion(options: Options, a: Operator, n: int | None) -> None:
    """Whether every corner projection of im(A) up to degree N is onto."""
    _emit_bool(options, units.corner_image_criterion(a, n))


# =============================================================================
# Centralizers
# =============================================================================

@main.command("commutes")
@click.argument("a", type=OPERATOR)
@click.argument("b", type=OPERATOR)
@pass_options
def commutes_command(options: Options, a: Operator, b: Operator) -> None:
    """Whether A*B = B*A."""
    _emit_bool(options, centralizer.commutes(a, b))


def _truncated(options: Options, a: Operator, n: int) -> None:
    description = CentralizerDescription(
        kind="truncated", basis=centralizer.commutant_in_F(a, n), window=n
    )
    note = centralizer.stabilization_note(a, n)
    payload = description.model_dump(mode="json")
    payload["note"] = note
    _emit(options, render_model("centralizer.txt.j2", description, note=note), payload)


@main.command("centralizer")
@click.argument("a", type=OPERATOR)
@pass_options
def centralizer_command(options: Options, a: Operator) -> None:
    """Closed-form centralizer, or the commutant in F within a window."""
    description = centralizer.centralizer_closed_form(a)
    if description is None:
        _truncated(options, a, options.window or options.settings.commutant_window)
        return
    _emit_model(options, "centralizer.txt.j2", description,
                symbolic=description.symbolic(), note=None)


@main.command()
@click.argument("a", type=OPERATOR)
@click.argument("n", type=click.IntRange(min=0), required=False)
@pass_options
def commutant(options: Options, a: Operator, n: int | None) -> None:
    """Elements of F of index at most N commuting with A."""
    if n is None:
        n = options.window if options.window is not None else options.settings.commutant_window
    _truncated(options, a, n)


# =============================================================================
# B1 = I1 / F
# =============================================================================

def _emit_b1(options: Options, b: B1Element) -> None:
    _emit(options, format_b1(b), b1_to_json(b))


@main.command()
@click.argument("a", type=OPERATOR)
@pass_options
def project(options: Options, a: Operator) -> None:
    """Image of A in B1, coefficients on the right."""
    _emit_b1(options, bquot.project(a))


@main.command()
@click.argument("u", type=B1)
@click.argument("v", type=B1)
@pass_options
def b1mul(options: Options, u: B1Element, v: B1Element) -> None:
    """Product in B1."""
    _emit_b1(options, bquot.b1_mul(u, v))


@main.command()
@click.argument("b", type=B1)
@pass_options
def isnormal(options: Options, b: B1Element) -> None:
    """Whether B is a normal element of B1."""
    _emit_bool(options, bquot.is_normal(b))


@main.command("normalize")
@click.argument("b", type=B1)
@pass_options
def normalize_command(options: Options, b: B1Element) -> None:
    """(alpha, beta, b') with b' = beta * B * alpha^-1 normal."""
    _emit_model(options, "normalization.txt.j2", bquot.normalize(b))


@main.command()
@click.argument("f", type=HPOLY)
@click.argument("g", type=HPOLY)
@pass_options
def orbit(options: Options, f: HPoly, g: HPoly) -> None:
    """The shift i with G(H) = F(H + i), or none."""
    shift = bquot.orbit_shift(f, g)
    _emit(options, "none" if shift is None else str(shift), shift)


@main.command()
@click.argument("alpha", type=HPOLY)
@click.argument("beta", type=HPOLY)
@pass_options
def less(options: Options, alpha: HPoly, beta: HPoly) -> None:
    """The orbit ordering ALPHA < BETA."""
    _emit_bool(options, bquot.poly_less(alpha, beta))


# =============================================================================
# Polynomials in H
# =============================================================================

@main.command()
@click.argument("p", type=HPOLY)
@pass_options
def roots(options: Options, p: HPoly) -> None:
    """Integer roots of P."""
    found = integer_roots(p)
    _emit(options, "{" + ", ".join(map(str, found)) + "}", found)


@main.command()
@click.argument("p", type=HPOLY)
@pass_options
def factorize(options: Options, p: HPoly) -> None:
    """Monic irreducible factors of P over Q with multiplicities."""
    factors = irreducible_factors(p)
    lines = [f.render() if m == 1 else f"({f.render()})^{m}" for f, m in factors]
    _emit(
        options,
        "\n".join(lines) or "1",
        [{"factor": poly_to_json(f), "multiplicity": m} for f, m in factors],
    )


def run(argv: list[str] | None = None) -> int:
    """Run the CLI without exiting the interpreter; returns the exit code."""
    try:
        result = main.main(args=argv, prog_name="intdiff", standalone_mode=False)
    except click.ClickException as exc:
        exc.show()
        return exc.exit_code
    except click.Abort:
        click.echo("Aborted!", err=True)
        return 1
    return result if isinstance(result, int) else 0
