"""
Text rendering of result models through Jinja2 templates.
"""

from functools import lru_cache
from pathlib import Path

from jinja2 import Environment, FileSystemLoader
from pydantic import BaseModel

from .algebra.bquot import B1Element
from .algebra.exactmath import HPoly, XPoly, scalar_str
from .algebra.lang import format_b1, format_operator
from .algebra.opcore import Operator

# Template directory
TEMPLATES_DIR = Path(__file__).parent / "templates"


def _xpoly(p: XPoly | None) -> str:
    return "-" if p is None else p.render()


def _hpoly(p: HPoly) -> str:
    return p.render()


def _op(a: Operator) -> str:
    return format_operator(a)


def _b1(b: B1Element) -> str:
    return format_b1(b)


def _braces(items) -> str:
    return "{" + ", ".join(items) + "}"


def _yesno(flag: bool) -> str:
    return "yes" if flag else "no"


@lru_cache(maxsize=1)
def environment() -> Environment:
    env = Environment(
        loader=FileSystemLoader(str(TEMPLATES_DIR)),
        autoescape=False,
        trim_blocks=True,
        lstrip_blocks=True,
        keep_trailing_newline=False,
    )
    env.filters.update(
        op=_op,
        xpoly=_xpoly,
        hpoly=_hpoly,
        b1=_b1,
        rational=scalar_str,
        braces=_braces,
        yesno=_yesno,
    )
    return env


def render(template_name: str, **context) -> str:
    return environment().get_template(template_name).render(**context).rstrip("\n")


def render_model(template_name: str, model: BaseModel, **extra) -> str:
    """Render a result model; its fields are available as top-level names."""
    context = {name: getattr(model, name) for name in type(model).model_fields}
    context.update(extra)
    return render(template_name, **context)
