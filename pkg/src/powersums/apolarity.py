"""The differential pairing between the primal and dual polynomial rings.

A dual monomial ``y^a`` acts on a primal form as ``d^a/dx^a`` and vice versa.
No multinomial rescaling is applied, so ``<y^a, x^b> = a! * [a == b]``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Dict, List, Sequence, Tuple

from . import exactla
from .exactla import RationalMatrix
from .forms import (
    Form,
    FormError,
    Monomial,
    Rational,
    Variance,
    evaluate,
    exp_factorial,
    monomial_basis,
    power,
    to_scalar,
)


def _falling(b: Monomial, a: Monomial) -> int:
    """prod b_i! / (b_i - a_i)!, or 0 when a does not divide b."""
    out = 1
    for bi, ai in zip(b, a):
        if ai > bi:
            return 0
        for t in range(bi - ai + 1, bi + 1):
            out *= t
    return out


def polarize(G: Form, F: Form) -> Form:
    """Apply ``G`` to ``F`` as a constant-coefficient differential operator."""
    if G.variance is F.variance:
        raise FormError("polarization needs forms of opposite variance")
    if G.nvars != F.nvars:
        raise FormError(f"arity mismatch: {G.nvars} vs {F.nvars}")
    if G.degree > F.degree:
        raise FormError(f"operator degree {G.degree} exceeds form degree {F.degree}")
    out: Dict[Monomial, Fraction] = {}
    for a, cg in G.coeffs.items():
        for b, cf in F.coeffs.items():
            w = _falling(b, a)
            if w:
                e = tuple(bi - ai for bi, ai in zip(b, a))
                out[e] = out.get(e, Fraction(0)) + cg * cf * w
    return Form(F.nvars, F.degree - G.degree, F.variance, out)


def apolar_pair(G: Form, F: Form) -> Fraction:
    if G.degree != F.degree:
        raise FormError(f"pairing needs equal degrees, got {G.degree} and {F.degree}")
    P = polarize(G, F)
    return P.coefficient((0,) * F.nvars)


@dataclass(frozen=True)
class CatalecticantMap:
    """Matrix of ``Psi -> P_Psi(F)`` from degree-k operators to degree m-k forms."""

    form: Form
    source_degree: int
    target_degree: int
    source_basis: Tuple[Monomial, ...]
    target_basis: Tuple[Monomial, ...]
    matrix: RationalMatrix

    @property
    def source_variance(self) -> Variance:
        return self.form.variance.opposite

    @property
    def target_variance(self) -> Variance:
        return self.form.variance

    def rank(self) -> int:
        return exactla.rank(self.matrix)

    def apply(self, psi: Form) -> Form:
        return polarize(psi, self.form)

    def column_form(self, j: int) -> Form:
        return Form.from_vector(self.form.nvars, self.target_degree, self.matrix.column(j), self.target_variance)


def catalecticant(F: Form, k: int) -> CatalecticantMap:
    m = F.degree
    if not 0 <= k <= m:
        raise FormError(f"k must lie in 0..{m}, got {k}")
    src = monomial_basis(F.nvars, k)
    tgt = monomial_basis(F.nvars, m - k)
    row_of = {e: i for i, e in enumerate(tgt)}
    cols = [[Fraction(0)] * len(src) for _ in tgt]
    for j, a in enumerate(src):
        for b, c in F.coeffs.items():
            w = _falling(b, a)
            if w:
                e = tuple(bi - ai for bi, ai in zip(b, a))
                cols[row_of[e]][j] += c * w
    return CatalecticantMap(F, k, m - k, src, tgt, RationalMatrix(cols, len(src)))


def middle_catalecticant(F: Form) -> CatalecticantMap:
    if F.degree % 2:
        raise FormError(f"form of odd degree {F.degree} has no middle catalecticant")
    return catalecticant(F, F.degree // 2)


def is_nondegenerate(F: Form) -> bool:
    cat = middle_catalecticant(F)
    return cat.rank() == cat.matrix.rows


def apolar_component(F: Form, k: int) -> List[Form]:
    """Basis of the degree-k forms ``G`` with ``P_G(F) = 0``."""
    cat = catalecticant(F, k)
    return [
        Form.from_vector(F.nvars, k, v, F.variance.opposite) for v in exactla.kernel_basis(cat.matrix)
    ]


def _check_point(q: Sequence[Rational], nvars: int) -> List[Fraction]:
    if len(q) != nvars:
        raise FormError(f"point has {len(q)} coordinates, expected {nvars}")
    q = [to_scalar(v) for v in q]
    if not any(q):
        raise FormError("the zero vector is not a point")
    return q


def polar_quadric(F_check: Form, q: Sequence[Rational]) -> Form:
    """``P_{H_q^2}(F_check)`` where ``H_q`` has coefficient vector ``q``."""
    if F_check.degree < 2:
        raise FormError("polar quadric needs degree at least 2")
    q = _check_point(q, F_check.nvars)
    Hq = Form.linear(q, F_check.variance.opposite)
    return polarize(power(Hq, 2), F_check)


def conjugacy(F_check: Form, p: Sequence[Rational], q: Sequence[Rational]) -> Fraction:
    """Value of the polar quadric at ``p`` evaluated at ``q``; symmetric in p, q."""
    q = _check_point(q, F_check.nvars)
    return evaluate(polar_quadric(F_check, p), q)


@dataclass(frozen=True)
class BiForm:
    """A bihomogeneous form in two point sets ``p`` and ``q``.

    ``coeffs`` maps ``(a, b)`` exponent pairs to the coefficient of
    ``p^a q^b``.
    """

    nvars: int
    bidegree: Tuple[int, int]
    coeffs: Dict[Tuple[Monomial, Monomial], Fraction]

    def __call__(self, p: Sequence[Rational], q: Sequence[Rational]) -> Fraction:
        p = [to_scalar(v) for v in p]
        q = [to_scalar(v) for v in q]
        total = Fraction(0)
        for (a, b), c in self.coeffs.items():
            t = c
            for pi, e in zip(p, a):
                t *= pi**e
            for qi, e in zip(q, b):
                t *= qi**e
            total += t
        return total

    def diagonal(self, variance: Variance = Variance.PRIMAL) -> Form:
        out: Dict[Monomial, Fraction] = {}
        for (a, b), c in self.coeffs.items():
            e = tuple(x + y for x, y in zip(a, b))
            out[e] = out.get(e, Fraction(0)) + c
        return Form(self.nvars, sum(self.bidegree), variance, out)

    def swap(self) -> "BiForm":
        return BiForm(self.nvars, self.bidegree[::-1], {(b, a): c for (a, b), c in self.coeffs.items()})

    def is_symmetric(self) -> bool:
        return self.coeffs == self.swap().coeffs


def biform(F_check: Form) -> BiForm:
    """Bihomogenization ``C(p, q) = conjugacy(F_check, p, q)`` as a (2, 2)-form."""
    if F_check.degree != 4:
        raise FormError("biform expects a quartic")
    n = F_check.nvars
    out: Dict[Tuple[Monomial, Monomial], Fraction] = {}
    for a in monomial_basis(n, 2):
        # (sum p_i d_i)^2 = sum_{|a|=2} 2/a! p^a d^a
        w = Fraction(factorial(2), exp_factorial(a))
        op = Form(n, 2, F_check.variance.opposite, {a: 1})
        for b, c in polarize(op, F_check).coeffs.items():
            out[(a, b)] = out.get((a, b), Fraction(0)) + w * c
    return BiForm(n, (2, 2), {k: v for k, v in out.items() if v})
