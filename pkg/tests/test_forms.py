import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from powersums.forms import (
    Form,
    FormError,
    ParseError,
    Variance,
    add,
    evaluate,
    format_form,
    multinomial,
    multiply,
    parse,
    power,
    scale,
)

from conftest import forms, rand_form, symbols, to_sympy


def x(i, n=2):
    return Form.linear([int(j == i) for j in range(n)])


def test_parse_examples():
    F = parse("x0^4 + 2*x0^3*x1", 2)
    assert F.degree == 4 and len(F.coeffs) == 2
    assert F.coefficient((3, 1)) == 2
    Z = parse("0", 2)
    assert dict(Z.coeffs) == {}
    G = parse("1/2*y0^2*y1^2", 2, Variance.DUAL)
    assert G.coefficient((2, 2)) == Fraction(1, 2)
    assert G.variance is Variance.DUAL


@pytest.mark.parametrize(
    "text, where",
    [("x0^4 + x2", 7), ("x0^2 + x1", 7), ("x0^2 + y1^2", 7), ("x0 ** 2", 4), ("x0^2 + 1/0*x1^2", 9)],
)
def test_parse_errors_report_position(text, where):
    with pytest.raises(ParseError) as info:
        parse(text, 2)
    assert info.value.position == where


def test_ring_examples():
    X, Y = x(0), x(1)
    assert multiply(X + Y, X - Y) == parse("x0^2-x1^2", 2)
    F = parse("x0^3-4*x0*x1^2", 2)
    assert add(F, scale(-1, F)).is_zero()
    assert multiply(X * X, Y * Y) == parse("x0^2*x1^2", 2)


def test_mismatch_errors():
    with pytest.raises(FormError):
        add(parse("x0^2", 2), parse("x0^3", 2))
    with pytest.raises(FormError):
        add(parse("x0", 2), parse("y0", 2, Variance.DUAL))
    with pytest.raises(FormError):
        multiply(parse("x0", 2), parse("x0", 3))
    with pytest.raises(FormError):
        evaluate(parse("x0", 2), (1, 2, 3))


def test_power_examples():
    X, Y = x(0), x(1)
    assert power(X + Y, 2) == parse("x0^2+2*x0*x1+x1^2", 2)
    assert power(X, 4) == parse("x0^4", 2)
    H = X - Y
    assert power(H, 4) == H * H * H * H == parse("x0^4-4*x0^3*x1+6*x0^2*x1^2-4*x0*x1^3+x1^4", 2)
    assert power(H, 0) == parse("1", 2)


def test_evaluate_examples():
    assert evaluate(parse("x0^2+x1^2", 2), (1, 1)) == 2
    assert evaluate(Form.zero(2, 3), (5, 7)) == 0
    # 1 - 2 - 2 + 1; agrees with the conjugacy diagonal entry -24 = 12 * F(1, -1)
    assert evaluate(parse("x0^4+2*x0^3*x1+2*x0*x1^3+x1^4", 2), (1, -1)) == -2


def test_format_is_canonical():
    F = parse("x1^2 + 3*x0*x1 - x0^2 + 1/2*x0*x1", 2)
    assert format_form(F) == "-x0^2+7/2*x0*x1+x1^2"
    assert format_form(parse("y2 - 2/6*y0", 3, Variance.DUAL)) == "-1/3*y0+y2"
    assert format_form(Form.zero(3, 2)) == "0"


def test_power_matches_multinomial_and_repeated_multiply():
    rng = random.Random(7)
    for _ in range(60):
        n = rng.randint(1, 4)
        h = [rng.randint(-4, 4) for _ in range(n)]
        H = Form.linear(h)
        m = rng.randint(0, 6)
        P = power(H, m)
        slow = Form(n, 0, Variance.PRIMAL, {(0,) * n: 1})
        for _ in range(m):
            slow = multiply(slow, H)
        assert P == slow
        for e, c in P.coeffs.items():
            want = multinomial(e)
            for hi, ei in zip(h, e):
                want *= hi**ei
            assert c == want


def test_multiply_agrees_with_sympy():
    rng = random.Random(3)
    xs = symbols(3)
    for _ in range(30):
        F = rand_form(rng, 3, rng.randint(0, 3), dens=True)
        G = rand_form(rng, 3, rng.randint(0, 3), dens=True)
        assert to_sympy(F * G, xs) == (to_sympy(F, xs) * to_sympy(G, xs)).expand()


@settings(max_examples=80, deadline=None)
@given(st.data())
def test_add_commutative_associative_distributive(data):
    n = data.draw(st.integers(1, 3))
    d = data.draw(st.integers(0, 3))
    e = data.draw(st.integers(0, 2))
    F, G, K = (data.draw(forms(st.just(n), st.just(d))) for _ in range(3))
    L = data.draw(forms(st.just(n), st.just(e)))
    assert F + G == G + F
    assert (F + G) + K == F + (G + K)
    assert L * (F + G) == L * F + L * G


@settings(max_examples=80, deadline=None)
@given(st.data())
def test_parse_format_round_trip(data):
    var = data.draw(st.sampled_from(list(Variance)))
    F = data.draw(forms(variance=var))
    assert parse(format_form(F), F.nvars, var, degree=F.degree) == F


def test_forms_are_hashable_values():
    A = parse("x0^2+x1^2", 2)
    B = parse("x1^2+x0^2", 2)
    assert A == B and hash(A) == hash(B)
    assert A != parse("y0^2+y1^2", 2, Variance.DUAL)
    with pytest.raises(FormError):
        Form(2, 2, Variance.PRIMAL, {(1, 0): 1})
