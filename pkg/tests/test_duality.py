import random
from fractions import Fraction

import pytest

from powersums.apolarity import conjugacy
from powersums.duality import (
    CertificationError,
    DegenerateFormError,
    DualityError,
    NotRepresentableError,
    PowerSumCertificate,
    ZeroCoefficientError,
    apolar_containment,
    conjugate_tuple_check,
    dual_form,
    power_sum_synthesize,
    squares_independent,
    verify_dual_pair,
    vsp_certify,
)
from powersums.forms import FormError, Variance, evaluate, parse

from conftest import rand_form, rand_gl2, rand_point, substitute

D = Variance.DUAL
FCHECK = parse("x0^4+2*x0^3*x1+2*x0*x1^3+x1^4", 2)
OMEGA = parse("1/288*y0^4+4/288*y0^3*y1-6/288*y0^2*y1^2+4/288*y0*y1^3+1/288*y1^4", 2, D)
TRIANGLE = [(1, 0), (0, 1), (1, -1)]


def transformed_pair(rng):
    """A GL2 image of the worked pair together with its polar triangle."""
    A = rand_gl2(rng)
    Fc = substitute(FCHECK, A)
    det = A[0][0] * A[1][1] - A[0][1] * A[1][0]
    inv = [[A[1][1], -A[0][1]], [-A[1][0], A[0][0]]]  # det * A^-1
    pts = [tuple(inv[i][0] * p[0] + inv[i][1] * p[1] for i in range(2)) for p in TRIANGLE]
    return Fc, pts, det


def test_dual_examples():
    assert dual_form(FCHECK) == OMEGA
    assert dual_form(parse("x0^4+x1^4+x0^2*x1^2", 2)) is None
    assert dual_form(parse("x0^2+x1^2", 2)) == parse("1/4*y0^2+1/4*y1^2", 2, D)


def test_dual_of_degenerate_reports_rank():
    with pytest.raises(DegenerateFormError) as info:
        dual_form(parse("x0^4", 2))
    assert info.value.rank == 1
    with pytest.raises(FormError):
        dual_form(parse("x0^3", 2))


def test_symmetric_family_has_no_rational_dual():
    # x^4 + y^4 + c x^2 y^2 needs c^2 = -12, impossible over Q
    for c in range(-30, 31):
        F = parse(f"x0^4+x1^4+{c}*x0^2*x1^2" if c >= 0 else f"x0^4+x1^4{c}*x0^2*x1^2", 2)
        try:
            assert dual_form(F) is None
        except DegenerateFormError:
            assert c in (0, 6, -6)


def test_verify_pair_examples():
    assert verify_dual_pair(FCHECK, OMEGA).kappa == 1
    assert verify_dual_pair(FCHECK, 2 * OMEGA).kappa == 2
    with pytest.raises(DualityError):
        verify_dual_pair(parse("x0^4+x1^4+x0^2*x1^2", 2), OMEGA)
    with pytest.raises(FormError):
        verify_dual_pair(FCHECK, parse("x0^4", 2))


def test_round_trip_and_involution_on_transformed_pairs():
    rng = random.Random(31)
    for _ in range(40):
        Fc, _, _ = transformed_pair(rng)
        Om = dual_form(Fc)
        assert Om is not None
        assert verify_dual_pair(Fc, Om).kappa == 1
        assert dual_form(Om) == Fc


def test_conjugate_tuple_examples():
    v = conjugate_tuple_check(FCHECK, TRIANGLE)
    assert v.passed and v.diagonal == (12, 12, -24)
    assert v.squares_independent
    v = conjugate_tuple_check(FCHECK, [(1, 0), (0, 1), (1, 1)])
    assert not v.passed
    assert v.matrix[0, 2] == 24
    rng = random.Random(2)
    for _ in range(20):
        Fc = rand_form(rng, 3, 4)
        q = rand_point(rng, 3)
        if evaluate(Fc, q):
            v = conjugate_tuple_check(Fc, [q])
            assert v.passed and v.diagonal == (12 * evaluate(Fc, q),)


def test_certify_examples():
    cert = vsp_certify(OMEGA, TRIANGLE)
    assert cert.alphas == (Fraction(1, 144), Fraction(1, 144), Fraction(-1, 288))
    assert cert.checks["apolar_containment"] and cert.checks["residual_zero"]
    cert = vsp_certify(parse("y0^4", 2, D), [(1, 0)])
    assert cert.alphas == (1,)
    with pytest.raises(NotRepresentableError):
        vsp_certify(OMEGA, [(1, 0), (0, 1), (1, 1)])


def test_certify_with_companion():
    cert = vsp_certify(OMEGA, TRIANGLE, FCHECK)
    assert cert.kappa == 1
    assert all(cert.checks.values()), cert.checks
    assert {a * cert.conjugacy_matrix[i, i] for i, a in enumerate(cert.alphas)} == {Fraction(1, 12)}


def test_zero_coefficient_is_reported_distinctly():
    with pytest.raises(ZeroCoefficientError) as info:
        vsp_certify(parse("y0^4", 2, D), [(1, 0), (0, 1)])
    assert info.value.zero_indices == [1]
    assert isinstance(info.value, CertificationError)
    assert not isinstance(info.value, NotRepresentableError)


def test_certificate_scaling():
    rng = random.Random(41)
    for _ in range(30):
        lam = Fraction(rng.choice([-3, -2, 2, 3, 5]), rng.randint(1, 4))
        i = rng.randrange(3)
        pts = [list(p) for p in TRIANGLE]
        pts[i] = [lam * c for c in pts[i]]
        a0 = vsp_certify(OMEGA, TRIANGLE).alphas
        a1 = vsp_certify(OMEGA, pts).alphas
        assert a1[i] == a0[i] / lam**4
        assert all(a1[j] == a0[j] for j in range(3) if j != i)


def test_certificate_record_round_trip():
    cert = vsp_certify(OMEGA, TRIANGLE, FCHECK)
    back = PowerSumCertificate.from_record(cert.to_record())
    assert back.form == cert.form and back.alphas == cert.alphas and back.points == cert.points
    assert back.conjugacy_matrix == cert.conjugacy_matrix and back.checks == cert.checks
    assert back.synthesize() == OMEGA


def test_synthesize_examples():
    syn = power_sum_synthesize([(1, 0), (0, 1)], [1, 1], 5)
    assert syn.form == parse("y0^5+y1^5", 2, D)
    syn = power_sum_synthesize(TRIANGLE, [Fraction(1, 144), Fraction(1, 144), Fraction(-1, 288)], 4)
    assert syn.form == OMEGA and syn.nondegenerate and syn.powers_independent
    rng = random.Random(6)
    pts = [rand_point(rng, 3) for _ in range(6)]
    syn = power_sum_synthesize(pts, [1] * 6, 4)
    assert syn.nondegenerate and syn.powers_independent
    with pytest.raises(ValueError):
        power_sum_synthesize(pts, [1] * 5, 4)


def test_apolar_containment_matches_span_membership():
    rng = random.Random(43)
    for _ in range(40):
        pts = [rand_point(rng, 2, -4, 4) for _ in range(3)]
        if rng.random() < 0.5:
            F = power_sum_synthesize(pts, [rng.randint(-3, 3) for _ in pts], 4).form
        else:
            F = rand_form(rng, 2, 4, variance=D, lo=-3, hi=3)
        if F.is_zero():
            continue
        try:
            vsp_certify(F, pts)
            member = True
        except ZeroCoefficientError:
            member = True
        except NotRepresentableError:
            member = False
        if squares_independent(pts, 2):
            assert apolar_containment(F, pts) == member


def test_bridge_on_transformed_pairs():
    rng = random.Random(47)
    for _ in range(30):
        Fc, pts, _ = transformed_pair(rng)
        Om = dual_form(Fc)
        v = conjugate_tuple_check(Fc, pts)
        assert v.passed
        cert = vsp_certify(Om, pts, Fc)
        assert all(cert.checks.values())
        # alpha_i * C_ii = 1 / 12 whenever kappa = 1
        assert {a * conjugacy(Fc, p, p) for a, p in zip(cert.alphas, pts)} == {Fraction(1, 12)}
