"""Dual forms, conjugate point tuples and exact power-sum certificates."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from . import exactla
from .apolarity import apolar_pair, catalecticant, middle_catalecticant, polar_quadric, polarize
from .exactla import RationalMatrix
from .forms import (
    Form,
    FormError,
    Rational,
    Variance,
    evaluate,
    format_form,
    monomial_basis,
    power,
    scale,
    to_scalar,
)

Point = Tuple[Fraction, ...]


class DegenerateFormError(ValueError):
    def __init__(self, rank: int, size: int):
        self.rank = rank
        self.size = size
        super().__init__(f"form is degenerate: middle catalecticant has rank {rank} < {size}")


class DualityError(ValueError):
    """A claimed dual pair fails one of its defining identities."""


class CertificationError(ValueError):
    pass


class NotRepresentableError(CertificationError):
    """The form is not in the span of the given powers."""


class ZeroCoefficientError(CertificationError):
    """The form is a power sum of a proper subset of the given points."""

    def __init__(self, alphas, zero_indices):
        self.alphas = alphas
        self.zero_indices = zero_indices
        super().__init__(f"coefficients vanish at indices {zero_indices}: representable by fewer points")


def _points(points: Sequence[Sequence[Rational]], nvars: int) -> List[Point]:
    out = []
    for p in points:
        if len(p) != nvars:
            raise FormError(f"point {tuple(p)} has {len(p)} coordinates, expected {nvars}")
        q = tuple(to_scalar(v) for v in p)
        if not any(q):
            raise FormError("the zero vector is not a point")
        out.append(q)
    return out


def dual_form(F: Form) -> Optional[Form]:
    """The form of opposite variance whose middle catalecticant inverts ``F``'s.

    Returns None when the inverse operator is not the catalecticant of any
    form.  Raises :class:`DegenerateFormError` if ``F`` is degenerate.
    """
    cat = middle_catalecticant(F)
    k = cat.source_degree
    size = cat.matrix.rows
    try:
        inv = exactla.inverse(cat.matrix)
    except exactla.SingularMatrixError as exc:
        raise DegenerateFormError(exc.rank, size) from None
    # inv maps degree-k forms of F's variance (columns, basis cat.target_basis)
    # to degree-k operators (rows, basis cat.source_basis).
    unknowns = monomial_basis(F.nvars, 2 * k)
    col = {e: i for i, e in enumerate(unknowns)}
    rows, rhs = [], []
    for i, d in enumerate(cat.source_basis):
        for j, g in enumerate(cat.target_basis):
            # entry (d, g) of the catalecticant of Omega: omega_{g+d} * (g+d)!/d!
            e = tuple(a + b for a, b in zip(g, d))
            w = 1
            for ei, di in zip(e, d):
                for t in range(di + 1, ei + 1):
                    w *= t
            row = [Fraction(0)] * len(unknowns)
            row[col[e]] = Fraction(w)
            rows.append(row)
            rhs.append(inv[i, j])
    sol = exactla.solve(RationalMatrix(rows, len(unknowns)), rhs)
    if sol is None:
        return None
    return Form.from_vector(F.nvars, 2 * k, sol, F.variance.opposite)


@dataclass(frozen=True)
class DualPair:
    F_check: Form
    F: Form
    kappa: Fraction


def _sample_points(nvars: int, count: int = 4, seed: int = 0) -> List[Point]:
    rng = random.Random(seed)
    pts = [tuple(Fraction(int(i == j)) for j in range(nvars)) for i in range(nvars)]
    pts.append(tuple(Fraction(1) for _ in range(nvars)))
    while len(pts) < nvars + 1 + count:
        p = tuple(Fraction(rng.randint(-7, 7)) for _ in range(nvars))
        if any(p):
            pts.append(p)
    return pts


def verify_dual_pair(F_check: Form, F: Form) -> DualPair:
    """Check that ``ap_F o ap_{F_check}`` is a scalar ``kappa`` times the identity."""
    if F_check.nvars != F.nvars:
        raise FormError("arity mismatch")
    if F_check.variance is F.variance:
        raise FormError("a dual pair needs opposite variances")
    if F_check.degree != F.degree or F.degree % 2:
        raise FormError("a dual pair needs two forms of the same even degree")
    A = middle_catalecticant(F_check).matrix
    B = middle_catalecticant(F).matrix
    C = B @ A
    kappa = C[0, 0]
    if kappa == 0:
        raise DualityError("composed operator has zero entry (0, 0); not a multiple of the identity")
    for i in range(C.rows):
        for j in range(C.cols):
            want = kappa if i == j else 0
            if C[i, j] != want:
                raise DualityError(f"composed operator entry ({i}, {j}) is {C[i, j]}, expected {want}")
    k = F.degree // 2
    for q in _sample_points(F.nvars):
        Hq = Form.linear(q, F.variance)
        Dq = polarize(power(Hq, k), F_check)
        lhs = polarize(Dq, F)
        target = power(Hq, k)
        if lhs != scale(kappa, target):
            raise DualityError(
                f"at point {tuple(str(v) for v in q)}: P_D(F) = {format_form(lhs)} is not "
                f"{kappa} * {format_form(target)}"
            )
    return DualPair(F_check, F, kappa)


@dataclass(frozen=True)
class ConjugacyVerdict:
    passed: bool
    matrix: RationalMatrix
    squares_independent: bool
    failures: Tuple[Tuple[int, int], ...] = ()

    @property
    def diagonal(self) -> Tuple[Fraction, ...]:
        return tuple(self.matrix[i, i] for i in range(self.matrix.rows))


def squares_independent(points: Sequence[Sequence[Rational]], nvars: int, k: int = 2) -> bool:
    """Whether the k-th powers of the linear forms with these coordinates are independent."""
    pts = _points(points, nvars)
    rows = [power(Form.linear(p), k).to_vector() for p in pts]
    return exactla.rank(RationalMatrix(rows, len(monomial_basis(nvars, k)))) == len(pts)


def conjugate_tuple_check(F_check: Form, points: Sequence[Sequence[Rational]]) -> ConjugacyVerdict:
    """Mutual conjugacy test: zero off the diagonal, nonzero on it."""
    pts = _points(points, F_check.nvars)
    quadrics = [polar_quadric(F_check, p) for p in pts]
    M = RationalMatrix([[evaluate(D, q) for q in pts] for D in quadrics], len(pts))
    failures = []
    for i in range(len(pts)):
        for j in range(len(pts)):
            bad = (M[i, j] == 0) if i == j else (M[i, j] != 0)
            if bad:
                failures.append((i, j))
    return ConjugacyVerdict(
        passed=not failures,
        matrix=M,
        squares_independent=squares_independent(pts, F_check.nvars),
        failures=tuple(failures),
    )


@dataclass(frozen=True)
class PowerSumCertificate:
    """Evidence that ``sum alphas[i] * H_i^m == form`` with every alpha nonzero."""

    form: Form
    points: Tuple[Point, ...]
    alphas: Tuple[Fraction, ...]
    kappa: Optional[Fraction] = None
    conjugacy_matrix: Optional[RationalMatrix] = None
    checks: Dict[str, bool] = field(default_factory=dict)

    def synthesize(self) -> Form:
        return power_sum_synthesize(self.points, self.alphas, self.form.degree, self.form.variance).form

    def to_record(self) -> dict:
        rec = {
            "form": format_form(self.form),
            "nvars": self.form.nvars,
            "points": [[str(v) for v in p] for p in self.points],
            "alphas": [str(a) for a in self.alphas],
            "checks": dict(sorted(self.checks.items())),
        }
        if self.kappa is not None:
            rec["kappa"] = str(self.kappa)
        if self.conjugacy_matrix is not None:
            rec["conjugacy_matrix"] = [[str(v) for v in r] for r in self.conjugacy_matrix.tolist()]
        return rec

    @classmethod
    def from_record(cls, rec: dict) -> "PowerSumCertificate":
        from .forms import infer_variance, parse

        text = rec["form"]
        var = infer_variance(text)
        nvars = rec.get("nvars") or len(rec["points"][0])
        points = tuple(tuple(Fraction(v) for v in p) for p in rec["points"])
        form = parse(text, nvars, var)
        M = rec.get("conjugacy_matrix")
        return cls(
            form=form,
            points=points,
            alphas=tuple(Fraction(a) for a in rec["alphas"]),
            kappa=Fraction(rec["kappa"]) if "kappa" in rec else None,
            conjugacy_matrix=RationalMatrix(M) if M else None,
            checks=dict(rec.get("checks", {})),
        )


def _power_matrix(pts: Sequence[Point], m: int, nvars: int, variance: Variance) -> RationalMatrix:
    """Columns are the coefficient vectors of H_i^m."""
    cols = [power(Form.linear(p, variance), m).to_vector() for p in pts]
    N = len(monomial_basis(nvars, m))
    return RationalMatrix([[c[r] for c in cols] for r in range(N)], len(pts))


def apolar_containment(F: Form, points: Sequence[Sequence[Rational]]) -> bool:
    """Every form of degree m vanishing at all points pairs to zero with ``F``.

    This is equivalent to ``F`` lying in the span of the m-th powers.
    """
    pts = _points(points, F.nvars)
    basis = monomial_basis(F.nvars, F.degree)
    op_var = F.variance.opposite
    evals = [[evaluate(Form(F.nvars, F.degree, op_var, {b: 1}), p) for b in basis] for p in pts]
    pairing = [apolar_pair(Form(F.nvars, F.degree, op_var, {b: 1}), F) for b in basis]
    E = RationalMatrix(evals, len(basis))
    return exactla.rank(E) == exactla.rank(RationalMatrix(evals + [pairing], len(basis)))


def vsp_certify(
    F: Form,
    points: Sequence[Sequence[Rational]],
    companion: Optional[Form] = None,
) -> PowerSumCertificate:
    """Solve ``sum alpha_i H_i^m = F`` exactly and package the evidence.

    Raises :class:`NotRepresentableError` when the system is inconsistent
    and :class:`ZeroCoefficientError` when some alpha must vanish.
    """
    pts = _points(points, F.nvars)
    if not pts:
        raise CertificationError("no points given")
    m = F.degree
    A = _power_matrix(pts, m, F.nvars, F.variance)
    checks: Dict[str, bool] = {}
    conj = None
    kappa = None
    if companion is not None:
        if companion.degree != 4 or m != 4:
            raise FormError("a conjugacy companion is only meaningful for quartics")
        verdict = conjugate_tuple_check(companion, pts)
        conj = verdict.matrix
        checks["conjugate_tuple"] = verdict.passed
        checks["squares_independent"] = verdict.squares_independent
        try:
            kappa = verify_dual_pair(companion, F).kappa
            checks["dual_pair"] = True
        except (DualityError, FormError):
            checks["dual_pair"] = False
    if m == 4 and len(pts) == len(monomial_basis(F.nvars, 2)):
        checks["apolar_containment"] = apolar_containment(F, pts)
    if exactla.rank(A) < len(pts):
        # the powers are dependent; alphas are not unique but a representation may exist
        checks["powers_independent"] = False
    else:
        checks["powers_independent"] = True
    alphas = exactla.solve(A, F.to_vector())
    if alphas is None:
        raise NotRepresentableError(
            f"{format_form(F)} is not a linear combination of the {m}-th powers of the given points"
        )
    zeros = [i for i, a in enumerate(alphas) if a == 0]
    if zeros:
        raise ZeroCoefficientError(alphas, zeros)
    synth = power_sum_synthesize(pts, alphas, m, F.variance).form
    checks["residual_zero"] = synth == F
    checks["alphas_nonzero"] = True
    if conj is not None and checks.get("dual_pair"):
        # alpha_i * C_ii is the same constant for every i
        vals = {a * conj[i, i] for i, a in enumerate(alphas)}
        checks["alpha_diagonal_constant"] = len(vals) == 1
    return PowerSumCertificate(F, tuple(pts), tuple(alphas), kappa, conj, checks)


@dataclass(frozen=True)
class Synthesis:
    form: Form
    powers_independent: bool
    nondegenerate: Optional[bool]


def power_sum_synthesize(
    points: Sequence[Sequence[Rational]],
    alphas: Sequence[Rational],
    m: int,
    variance: Variance = Variance.DUAL,
) -> Synthesis:
    """``sum alphas[i] * H_i^m`` with ``H_i`` the linear forms given by ``points``."""
    if len(points) != len(alphas):
        raise ValueError(f"{len(points)} points but {len(alphas)} coefficients")
    if m < 1:
        raise ValueError("degree must be at least 1")
    if not points:
        raise ValueError("no points given")
    nvars = len(points[0])
    pts = _points(points, nvars)
    out = Form.zero(nvars, m, variance)
    for p, a in zip(pts, alphas):
        out = out + scale(a, power(Form.linear(p, variance), m))
    indep = squares_independent(pts, nvars, m // 2)
    if m % 2:
        return Synthesis(out, indep, None)
    cat = catalecticant(out, m // 2)
    return Synthesis(out, indep, cat.rank() == cat.matrix.rows)
