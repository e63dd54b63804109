import random
import re
from fractions import Fraction

import pytest
import sympy
from hypothesis import strategies as st

from powersums.forms import Form, Variance, monomial_basis

_CRITERIA = {}


def rand_form(rng: random.Random, nvars: int, degree: int, variance=Variance.PRIMAL, lo=-9, hi=9, dens=False) -> Form:
    coeffs = {}
    for e in monomial_basis(nvars, degree):
        c = rng.randint(lo, hi)
        if dens and c and rng.random() < 0.3:
            c = Fraction(c, rng.randint(1, 7))
        coeffs[e] = c
    return Form(nvars, degree, variance, coeffs)


def rand_point(rng: random.Random, nvars: int, lo=-6, hi=6):
    while True:
        p = tuple(rng.randint(lo, hi) for _ in range(nvars))
        if any(p):
            return p


def to_sympy(F: Form, symbols):
    """Independent reading of a form as a sympy polynomial expression."""
    expr = sympy.Integer(0)
    for e, c in F.coeffs.items():
        term = sympy.Rational(c.numerator, c.denominator)
        for s, k in zip(symbols, e):
            term *= s**k
        expr += term
    return sympy.expand(expr)


def sympy_differentiate(G: Form, F: Form, xs):
    """G(d/dx) applied to F, computed by sympy."""
    f = to_sympy(F, xs)
    out = sympy.Integer(0)
    for e, c in G.coeffs.items():
        d = f
        for x, k in zip(xs, e):
            if k:
                d = sympy.diff(d, x, k)
        out += sympy.Rational(c.numerator, c.denominator) * d
    return sympy.expand(out)


def symbols(n, letter="x"):
    return sympy.symbols(" ".join(f"{letter}{i}" for i in range(n)) + " ", seq=True)


def forms(nvars=st.integers(1, 3), degree=st.integers(0, 4), variance=Variance.PRIMAL):
    @st.composite
    def build(draw):
        n = draw(nvars)
        d = draw(degree)
        basis = monomial_basis(n, d)
        vals = draw(st.lists(st.fractions(min_value=-20, max_value=20, max_denominator=6), min_size=len(basis), max_size=len(basis)))
        return Form(n, d, variance, dict(zip(basis, vals)))

    return build()


def pytest_runtest_logreport(report):
    m = re.search(r"test_criterion_(\d+)", report.nodeid)
    if not m:
        return
    key = int(m.group(1))
    if report.when == "call" or report.outcome != "passed":
        ok = report.outcome == "passed"
        _CRITERIA[key] = _CRITERIA.get(key, True) and ok


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_CRITERIA):
        terminalreporter.write_line(f"criterion {key}: {'PASS' if _CRITERIA[key] else 'FAIL'}")


@pytest.fixture
def rng():
    return random.Random(20240601)


def substitute(F: Form, A) -> Form:
    """F(A x): variable i becomes the linear form with coefficients A[i]."""
    n = F.nvars
    out = Form.zero(n, F.degree, F.variance)
    for e, c in F.coeffs.items():
        term = Form(n, 0, F.variance, {(0,) * n: c})
        for i, k in enumerate(e):
            for _ in range(k):
                term = term * Form.linear(A[i], F.variance)
        out = out + term
    return out


def rand_gl2(rng: random.Random, lo=-3, hi=3):
    while True:
        A = [[rng.randint(lo, hi) for _ in range(2)] for _ in range(2)]
        if A[0][0] * A[1][1] - A[0][1] * A[1][0]:
            return A


def distinct_points(rng: random.Random, n: int, nvars: int, lo=-5, hi=5):
    """n nonzero integer points, pairwise non-proportional."""
    pts = []
    while len(pts) < n:
        p = rand_point(rng, nvars, lo, hi)
        if any(all(p[i] * q[j] == p[j] * q[i] for i in range(nvars) for j in range(nvars)) for q in pts):
            continue
        pts.append(p)
    return pts
