"""Input checks shared by the estimators and the command line."""
from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence, Tuple

from .forms import Form, FormError, Variance, to_scalar


def check_form(
    F,
    nvars: Optional[int] = None,
    degree: Optional[int] = None,
    variance: Optional[Variance] = None,
    allow_zero: bool = True,
) -> Form:
    if not isinstance(F, Form):
        raise TypeError(f"expected a Form, got {type(F).__name__}")
    if nvars is not None and F.nvars != nvars:
        raise FormError(f"expected {nvars} variables, got {F.nvars}")
    if degree is not None and F.degree != degree:
        raise FormError(f"expected degree {degree}, got {F.degree}")
    if variance is not None and F.variance is not variance:
        raise FormError(f"expected {variance.name} variance, got {F.variance.name}")
    if not allow_zero and not F:
        raise FormError("the zero form is not allowed here")
    return F


def check_points(points, nvars: Optional[int] = None, allow_zero: bool = False) -> Tuple[Tuple[Fraction, ...], ...]:
    """Coerce a sequence of coordinate vectors to exact tuples of equal length."""
    out = []
    for p in points:
        q = tuple(to_scalar(v) for v in p)
        if nvars is None:
            nvars = len(q)
        if len(q) != nvars:
            raise FormError(f"point {q} has {len(q)} coordinates, expected {nvars}")
        if not allow_zero and not any(q):
            raise FormError("the zero vector is not a point")
        out.append(q)
    return tuple(out)


def parse_points(text: str) -> Tuple[Tuple[Fraction, ...], ...]:
    """``"1,0;0,1;1,-1"`` -> ((1, 0), (0, 1), (1, -1)) as Fractions."""
    rows = [r for r in (t.strip() for t in text.split(";")) if r]
    if not rows:
        raise ValueError("no points given")
    try:
        return check_points([[Fraction(v.strip()) for v in r.split(",")] for r in rows])
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"bad point list {text!r}: {exc}") from None
