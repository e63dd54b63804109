"""Explicit Waring decompositions.

``sylvester_binary`` is exact and only ever returns rational linear forms;
``numeric_waring`` is a seeded floating-point search whose output is
advisory.  Both are also exposed as scikit-learn style estimators
(:class:`SylvesterDecomposer`, :class:`NumericWaring`).
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import gcd, lcm
from typing import List, Optional, Sequence, Tuple

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import ConvergenceWarning
from sklearn.utils.validation import check_is_fitted
from sympy import divisors

from . import exactla
from .apolarity import apolar_component
from .duality import power_sum_synthesize
from .exactla import RationalMatrix
from .forms import Form, FormError, monomial_basis, multinomial, power
from .validation import check_form

Point = Tuple[Fraction, ...]


# ---------------------------------------------------------------------------
# univariate helpers over Q, coefficients listed from the constant term up

def _trim(p: List[Fraction]) -> List[Fraction]:
    while p and p[-1] == 0:
        p = p[:-1]
    return p


def _polydivmod(a: List[Fraction], b: List[Fraction]):
    a = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    while len(a) >= len(b) and a:
        c = a[-1] / b[-1]
        s = len(a) - len(b)
        q[s] = c
        for i, bi in enumerate(b):
            a[s + i] -= c * bi
        a = _trim(a)
    return _trim(q), a


def _polygcd(a: List[Fraction], b: List[Fraction]) -> List[Fraction]:
    a, b = _trim(a), _trim(b)
    while b:
        a, b = b, _polydivmod(a, b)[1]
    return [c / a[-1] for c in a] if a else a


def _derivative(p: List[Fraction]) -> List[Fraction]:
    return _trim([i * c for i, c in enumerate(p)][1:])


def _primitive(p: List[Fraction]) -> List[int]:
    den = 1
    for c in p:
        den = lcm(den, c.denominator)
    ints = [int(c * den) for c in p]
    g = 0
    for c in ints:
        g = gcd(g, c)
    return [c // g for c in ints] if g else ints


def _rational_roots(p: List[Fraction]) -> List[Fraction]:
    """Distinct rational roots by the rational root test on the primitive form."""
    ints = _primitive(_trim(p))
    roots = []
    if not ints:
        return roots
    while ints and ints[0] == 0:
        ints = ints[1:]
        if Fraction(0) not in roots:
            roots.append(Fraction(0))
    if len(ints) <= 1:
        return roots
    lead, const = abs(ints[-1]), abs(ints[0])
    for q in divisors(lead):
        for a in divisors(const):
            for r in (Fraction(a, q), Fraction(-a, q)):
                if r.denominator != q or r in roots:
                    continue
                val = Fraction(0)
                for c in reversed(ints):
                    val = val * r + c
                if val == 0:
                    roots.append(r)
    return roots


def binary_roots(G: Form) -> Tuple[bool, List[Point]]:
    """Squarefreeness and the rational projective roots of a binary form.

    A root ``(l, u)`` means ``G(l, u) == 0``.  Finite roots come as coprime
    ``(num, den)`` with ``den > 0``; a root at infinity is ``(1, 0)``.
    """
    if G.nvars != 2:
        raise FormError("binary_roots needs a binary form")
    k = G.degree
    # G(t, 1) = sum_i c_{(i, k-i)} t^i
    g = [G.coefficient((i, k - i)) for i in range(k + 1)]
    g = _trim(g)
    at_infinity = k - (len(g) - 1)
    squarefree = at_infinity <= 1 and len(_polygcd(g, _derivative(g))) <= 1
    pts: List[Point] = []
    if at_infinity:
        pts.append((Fraction(1), Fraction(0)))
    for r in _rational_roots(g):
        pts.append((Fraction(r.numerator), Fraction(r.denominator)))
    return squarefree, pts


# ---------------------------------------------------------------------------
# Sylvester


class SylvesterObstruction(ArithmeticError):
    """No decomposition with rational linear forms was found.

    ``rank`` is the Waring rank over the complex numbers when it could be
    read off the apolar form (squarefree minimal generator), else None.
    """

    def __init__(self, form: Form, apolar_form: Optional[Form], rational_roots, squarefree: bool,
                 rank: Optional[int], kernel_dimension: int):
        self.form = form
        self.apolar_form = apolar_form
        self.rational_roots = rational_roots
        self.squarefree = squarefree
        self.rank = rank
        self.kernel_dimension = kernel_dimension
        if apolar_form is None:
            msg = "no squarefree apolar form with rational roots found"
        else:
            msg = (
                f"squarefree apolar form {apolar_form} has {len(rational_roots)} rational roots "
                f"out of {apolar_form.degree}; rank over C is {rank}"
            )
        super().__init__(msg)


@dataclass(frozen=True)
class BinaryDecomposition:
    rank: int
    degree: int
    forms: Tuple[Form, ...]
    alphas: Tuple[Fraction, ...]
    exact: bool = True
    apolar_form: Optional[Form] = None
    unique: bool = True

    @property
    def points(self) -> Tuple[Point, ...]:
        return tuple(H.linear_coords() for H in self.forms)

    def synthesize(self) -> Form:
        return power_sum_synthesize(self.points, self.alphas, self.degree, self.forms[0].variance).form


def _candidates(basis: List[Form], limit: int = 200):
    yield from basis
    if len(basis) < 2:
        return
    seen = 0
    rng = range(-2, 3)
    for combo in product(rng, repeat=len(basis)):
        if sum(1 for c in combo if c) < 2:
            continue
        G = Form.zero(basis[0].nvars, basis[0].degree, basis[0].variance)
        for c, B in zip(combo, basis):
            if c:
                G = G + c * B
        if G:
            yield G
        seen += 1
        if seen >= limit:
            return


def sylvester_binary(F: Form) -> BinaryDecomposition:
    """Exact Waring decomposition of a binary form via its apolar forms.

    Raises :class:`SylvesterObstruction` when the minimal squarefree apolar
    form does not split over the rationals.
    """
    check_form(F, nvars=2)
    if not F:
        raise FormError("the zero form has no decomposition")
    m = F.degree
    first: Optional[Tuple] = None
    for k in range(1, m + 2):
        basis = apolar_component(F, k)
        if not basis:
            continue
        basis.sort(key=lambda G: G.terms()[0][0])
        unique = len(basis) == 1
        for G in _candidates(basis):
            sq, roots = binary_roots(G)
            if not sq:
                continue
            if first is None:
                first = (G, roots, k, len(basis))
            if len(roots) != k:
                continue
            forms = [Form.linear(r, F.variance) for r in roots]
            cols = [power(H, m).to_vector() for H in forms]
            N = len(cols[0])
            A = RationalMatrix([[c[i] for c in cols] for i in range(N)], len(cols))
            alphas = exactla.solve(A, F.to_vector())
            if alphas is None or any(a == 0 for a in alphas):
                continue
            return BinaryDecomposition(k, m, tuple(forms), tuple(alphas), True, G, unique)
        if first is not None:
            G, roots, kk, dim = first
            raise SylvesterObstruction(F, G, roots, True, kk, dim)
    raise SylvesterObstruction(F, None, [], False, None, 0)


# ---------------------------------------------------------------------------
# numeric search


@dataclass
class NumericDecomposition:
    points: np.ndarray
    alphas: np.ndarray
    residual: float
    success: bool
    jacobian_rank: int
    nullity: int
    raw_nullity: int
    iterations: int
    restarts: int


def _float_vector(F: Form) -> np.ndarray:
    return np.array([float(c) for c in F.to_vector()])


class _PowerModel:
    """Coefficient vectors of sum alpha_i H_i^m and their derivatives."""

    def __init__(self, nvars: int, m: int):
        self.m = m
        self.nvars = nvars
        self.E = np.array(monomial_basis(nvars, m), dtype=float)
        self.mult = np.array([multinomial(e) for e in monomial_basis(nvars, m)], dtype=float)

    def powers(self, H: np.ndarray) -> np.ndarray:
        # (n, N): multinomial * prod h^e
        return self.mult * np.prod(H[:, None, :] ** self.E[None, :, :], axis=2)

    def residual(self, H, a, target):
        return a @ self.powers(H) - target

    def jacobian(self, H, a) -> np.ndarray:
        n, nv = H.shape
        P = self.powers(H)
        J = np.empty((len(self.mult), n * nv + n))
        for j in range(nv):
            Ej = self.E[:, j]
            # d/dh_j of mult * h^E = mult * E_j * h^(E - e_j); E_j = 0 rows vanish anyway
            Em = self.E.copy()
            Em[:, j] = np.maximum(Em[:, j] - 1, 0)
            D = self.mult * Ej * np.prod(H[:, None, :] ** Em[None, :, :], axis=2)
            J[:, j:n * nv:nv] = (a[:, None] * D).T
        J[:, n * nv:] = P.T
        return J


def numeric_waring(
    F: Form,
    n: int,
    seed: int,
    tol: float = 1e-8,
    max_iter: int = 500,
    restarts: int = 20,
) -> NumericDecomposition:
    """Seeded Levenberg-Marquardt search for ``F ~ sum alpha_i H_i^m`` with n terms.

    The residual is the Euclidean norm of ``sum - F`` on the graded-lex
    coefficient vector (absolute, not divided by ``||F||``).
    ``nullity`` is the Jacobian nullity after removing the n rescaling
    directions ``(H_i, alpha_i) -> (t H_i, t^-m alpha_i)``.
    """
    check_form(F)
    if n < 1:
        raise ValueError("n must be positive")
    m, nv = F.degree, F.nvars
    target = _float_vector(F)
    norm = np.linalg.norm(target)
    if norm == 0:
        raise FormError("the zero form has no decomposition")
    target = target / norm
    model = _PowerModel(nv, m)
    rng = np.random.default_rng(seed)

    best = None
    total_iter = 0
    used = 0
    goal = tol / norm
    for attempt in range(restarts):
        used = attempt + 1
        H = rng.standard_normal((n, nv))
        a = np.linalg.lstsq(model.powers(H).T, target, rcond=None)[0]
        r = model.residual(H, a, target)
        cost = r @ r
        lam = None
        nu = 2.0
        for _ in range(max_iter):
            total_iter += 1
            J = model.jacobian(H, a)
            A = J.T @ J
            g = J.T @ r
            if lam is None:
                lam = 1e-3 * np.max(np.diag(A))
            # the rescaling gauge makes J^T J singular, so keep lam off zero
            lam = max(lam, 1e-12 * np.max(np.diag(A)))
            try:
                step = np.linalg.solve(A + lam * np.eye(A.shape[0]), -g)
            except np.linalg.LinAlgError:
                lam *= nu
                nu *= 2
                continue
            H2 = H + step[: n * nv].reshape(n, nv)
            a2 = a + step[n * nv:]
            r2 = model.residual(H2, a2, target)
            c2 = r2 @ r2
            predicted = step @ (lam * step - g)
            rho = (cost - c2) / predicted if predicted > 0 else -1.0
            if rho > 0:
                # keep the forms well scaled: |H_i| = 1, alpha absorbs the scale
                s = np.linalg.norm(H2, axis=1)
                H, a, r = H2 / s[:, None], a2 * s**m, r2
                gain = cost - c2
                cost = c2
                lam *= max(1 / 3, 1 - (2 * rho - 1) ** 3)
                nu = 2.0
                if math.sqrt(cost) < goal * 1e-3 or gain < 1e-30:
                    break
            else:
                lam *= nu
                nu *= 2
                if lam > 1e20:
                    break
        res = math.sqrt(cost)
        if best is None or res < best[0]:
            best = (res, H.copy(), a.copy())
        if res < goal:
            break

    res, H, a = best
    J = model.jacobian(H, a)
    sv = np.linalg.svd(J, compute_uv=False)
    jrank = int(np.sum(sv > sv[0] * 1e-7)) if sv.size else 0
    raw = J.shape[1] - jrank
    return NumericDecomposition(
        points=H,
        alphas=a * norm,
        residual=float(res * norm),
        success=bool(res * norm < tol),
        jacobian_rank=jrank,
        nullity=raw - n,
        raw_nullity=raw,
        iterations=total_iter,
        restarts=used,
    )


# ---------------------------------------------------------------------------
# estimator front ends


class SylvesterDecomposer(BaseEstimator):
    """Exact binary Waring decomposition as an estimator.

    After ``fit(F)``: ``rank_``, ``forms_``, ``points_``, ``alphas_``,
    ``apolar_form_`` and ``unique_``.
    """

    def __init__(self, raise_on_obstruction: bool = True):
        self.raise_on_obstruction = raise_on_obstruction

    def fit(self, F: Form, y=None):
        try:
            dec = sylvester_binary(F)
        except SylvesterObstruction as exc:
            if self.raise_on_obstruction:
                raise
            self.obstruction_ = exc
            self.rank_ = exc.rank
            self.forms_ = None
            return self
        self.obstruction_ = None
        self.decomposition_ = dec
        self.rank_ = dec.rank
        self.forms_ = dec.forms
        self.points_ = dec.points
        self.alphas_ = dec.alphas
        self.apolar_form_ = dec.apolar_form
        self.unique_ = dec.unique
        self.degree_ = F.degree
        self.variance_ = F.variance
        return self

    def reconstruct(self) -> Form:
        check_is_fitted(self, "forms_")
        if self.forms_ is None:
            raise ValueError("fit ended in an obstruction; nothing to reconstruct")
        return power_sum_synthesize(self.points_, self.alphas_, self.degree_, self.variance_).form

    def score(self, F: Form, y=None) -> float:
        """1.0 when the decomposition reproduces ``F`` exactly, else 0.0."""
        return float(self.reconstruct() == F)


class NumericWaring(BaseEstimator):
    """Floating-point Waring search with ``n_terms`` powers."""

    def __init__(self, n_terms: int = 1, seed: int = 0, tol: float = 1e-8, max_iter: int = 500, restarts: int = 20):
        self.n_terms = n_terms
        self.seed = seed
        self.tol = tol
        self.max_iter = max_iter
        self.restarts = restarts

    def fit(self, F: Form, y=None):
        res = numeric_waring(F, self.n_terms, self.seed, self.tol, self.max_iter, self.restarts)
        self.result_ = res
        self.points_ = res.points
        self.alphas_ = res.alphas
        self.residual_ = res.residual
        self.nullity_ = res.nullity
        self.jacobian_rank_ = res.jacobian_rank
        self.converged_ = res.success
        self.degree_ = F.degree
        if not res.success:
            warnings.warn(
                f"residual {res.residual:.3e} above tol {self.tol:g} after {res.iterations} iterations",
                ConvergenceWarning,
            )
        return self

    def coefficients(self) -> np.ndarray:
        """Coefficient vector (graded-lex) of the fitted power sum."""
        check_is_fitted(self, "result_")
        model = _PowerModel(self.points_.shape[1], self.degree_)
        return self.alphas_ @ model.powers(self.points_)

    def score(self, F: Form, y=None) -> float:
        """Negative relative residual against ``F``."""
        t = _float_vector(F)
        return -float(np.linalg.norm(self.coefficients() - t) / np.linalg.norm(t))
