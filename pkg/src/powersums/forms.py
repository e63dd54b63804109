"""Homogeneous forms with exact rational coefficients.

A :class:`Form` lives either in the primal ring (variables ``x0..x9``) or in
the dual ring (variables ``y0..y9``).  The two rings act on each other by
differentiation, see :mod:`powersums.apolarity`.
"""
from __future__ import annotations

import enum
import math
import re
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence, Tuple, Union

Monomial = Tuple[int, ...]
Scalar = Fraction
Rational = Union[int, Fraction, str]

MAX_VARS = 10


class Variance(enum.Enum):
    PRIMAL = "x"
    DUAL = "y"

    @property
    def opposite(self) -> "Variance":
        return Variance.DUAL if self is Variance.PRIMAL else Variance.PRIMAL

    @property
    def letter(self) -> str:
        return self.value


class FormError(ValueError):
    """Raised on arity, degree or variance mismatches."""


class ParseError(ValueError):
    def __init__(self, message: str, text: str, position: int):
        self.text = text
        self.position = position
        super().__init__(f"{message} at position {position}: {text!r}")


def to_scalar(value: Rational) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise TypeError(f"cannot use {type(value).__name__} as an exact scalar")


@lru_cache(maxsize=None)
def monomial_basis(nvars: int, degree: int) -> Tuple[Monomial, ...]:
    """Exponent vectors of the given degree in graded-lex order (x0^d first)."""
    if nvars < 1:
        raise FormError("nvars must be positive")
    if degree < 0:
        return ()
    out = []
    for combo in combinations_with_replacement(range(nvars), degree):
        exps = [0] * nvars
        for i in combo:
            exps[i] += 1
        out.append(tuple(exps))
    out.sort(reverse=True)
    return tuple(out)


def multinomial(exps: Sequence[int]) -> int:
    out = math.factorial(sum(exps))
    for e in exps:
        out //= math.factorial(e)
    return out


def exp_factorial(exps: Sequence[int]) -> int:
    out = 1
    for e in exps:
        out *= math.factorial(e)
    return out


class Form:
    """An immutable homogeneous polynomial.

    Coefficients are kept in a sparse ``{exponents: Fraction}`` map with no
    zero entries, so equality of forms is equality of the maps.
    """

    __slots__ = ("nvars", "degree", "variance", "_coeffs", "_hash")

    def __init__(
        self,
        nvars: int,
        degree: int,
        variance: Variance = Variance.PRIMAL,
        coeffs: Mapping[Monomial, Rational] | None = None,
    ):
        if not 1 <= nvars:
            raise FormError(f"nvars must be positive, got {nvars}")
        if degree < 0:
            raise FormError(f"degree must be non-negative, got {degree}")
        if not isinstance(variance, Variance):
            raise FormError(f"variance must be a Variance, got {variance!r}")
        clean: dict = {}
        for exps, c in (coeffs or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != nvars or any(e < 0 for e in exps):
                raise FormError(f"bad exponent vector {exps} for {nvars} variables")
            if sum(exps) != degree:
                raise FormError(f"monomial {exps} has degree {sum(exps)}, expected {degree}")
            c = to_scalar(c)
            if c:
                clean[exps] = clean.get(exps, Fraction(0)) + c
                if not clean[exps]:
                    del clean[exps]
        self.nvars = nvars
        self.degree = degree
        self.variance = variance
        self._coeffs = clean
        self._hash = None

    # construction helpers
    @classmethod
    def zero(cls, nvars: int, degree: int, variance: Variance = Variance.PRIMAL) -> "Form":
        return cls(nvars, degree, variance)

    @classmethod
    def linear(cls, coords: Sequence[Rational], variance: Variance = Variance.PRIMAL) -> "Form":
        n = len(coords)
        coeffs = {}
        for i, c in enumerate(coords):
            e = [0] * n
            e[i] = 1
            coeffs[tuple(e)] = c
        return cls(n, 1, variance, coeffs)

    @classmethod
    def from_vector(
        cls, nvars: int, degree: int, vector: Sequence[Rational], variance: Variance = Variance.PRIMAL
    ) -> "Form":
        basis = monomial_basis(nvars, degree)
        if len(vector) != len(basis):
            raise FormError(f"expected {len(basis)} coefficients, got {len(vector)}")
        return cls(nvars, degree, variance, dict(zip(basis, vector)))

    # accessors
    @property
    def coeffs(self) -> Mapping[Monomial, Fraction]:
        return MappingProxyType(self._coeffs)

    def coefficient(self, exps: Sequence[int]) -> Fraction:
        return self._coeffs.get(tuple(exps), Fraction(0))

    def to_vector(self) -> list:
        return [self._coeffs.get(b, Fraction(0)) for b in monomial_basis(self.nvars, self.degree)]

    def is_zero(self) -> bool:
        return not self._coeffs

    def __bool__(self) -> bool:
        return bool(self._coeffs)

    def terms(self):
        """(exponents, coefficient) pairs in graded-lex order."""
        return sorted(self._coeffs.items(), reverse=True)

    def linear_coords(self) -> Tuple[Fraction, ...]:
        if self.degree != 1:
            raise FormError("not a linear form")
        return tuple(self.coefficient(b) for b in monomial_basis(self.nvars, 1))

    # comparisons
    def _key(self):
        return (self.nvars, self.degree, self.variance, frozenset(self._coeffs.items()))

    def __eq__(self, other):
        if not isinstance(other, Form):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._key())
        return self._hash

    def __repr__(self):
        return f"Form({format_form(self)!r}, nvars={self.nvars}, degree={self.degree}, {self.variance.name})"

    def __str__(self):
        return format_form(self)

    # arithmetic
    def __add__(self, other):
        if isinstance(other, Form):
            return add(self, other)
        return NotImplemented

    def __sub__(self, other):
        if isinstance(other, Form):
            return add(self, scale(-1, other))
        return NotImplemented

    def __neg__(self):
        return scale(-1, self)

    def __mul__(self, other):
        if isinstance(other, Form):
            return multiply(self, other)
        if isinstance(other, (int, Fraction)):
            return scale(other, self)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return scale(other, self)
        return NotImplemented

    def __pow__(self, m: int):
        if self.degree == 1:
            return power(self, m)
        out = Form(self.nvars, 0, self.variance, {(0,) * self.nvars: 1})
        for _ in range(m):
            out = multiply(out, self)
        return out

    def __call__(self, *point):
        if len(point) == 1 and isinstance(point[0], (list, tuple)):
            point = point[0]
        return evaluate(self, point)


def _check_compatible(F: Form, G: Form) -> None:
    if F.nvars != G.nvars:
        raise FormError(f"arity mismatch: {F.nvars} vs {G.nvars}")
    if F.variance is not G.variance:
        raise FormError(f"variance mismatch: {F.variance.name} vs {G.variance.name}")


def add(F: Form, G: Form) -> Form:
    _check_compatible(F, G)
    if F.degree != G.degree:
        raise FormError(f"cannot add forms of degree {F.degree} and {G.degree}")
    coeffs = dict(F._coeffs)
    for e, c in G._coeffs.items():
        coeffs[e] = coeffs.get(e, Fraction(0)) + c
    return Form(F.nvars, F.degree, F.variance, coeffs)


def scale(c: Rational, F: Form) -> Form:
    c = to_scalar(c)
    return Form(F.nvars, F.degree, F.variance, {e: c * v for e, v in F._coeffs.items()})


def multiply(F: Form, G: Form) -> Form:
    _check_compatible(F, G)
    coeffs: dict = {}
    for e1, c1 in F._coeffs.items():
        for e2, c2 in G._coeffs.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            coeffs[e] = coeffs.get(e, Fraction(0)) + c1 * c2
    return Form(F.nvars, F.degree + G.degree, F.variance, coeffs)


def power(H: Form, m: int) -> Form:
    """Multinomial expansion of ``H**m`` for a linear form ``H``."""
    if H.degree != 1:
        raise FormError("power() expects a linear form")
    if m < 0:
        raise FormError("exponent must be non-negative")
    h = H.linear_coords()
    coeffs = {}
    for exps in monomial_basis(H.nvars, m):
        c = Fraction(multinomial(exps))
        for hi, e in zip(h, exps):
            if e:
                c *= hi**e
        coeffs[exps] = c
    return Form(H.nvars, m, H.variance, coeffs)


def evaluate(F: Form, point: Sequence[Rational]) -> Fraction:
    if len(point) != F.nvars:
        raise FormError(f"point has {len(point)} coordinates, form has {F.nvars} variables")
    p = [to_scalar(v) for v in point]
    total = Fraction(0)
    for exps, c in F._coeffs.items():
        term = c
        for pi, e in zip(p, exps):
            if e:
                term *= pi**e
        total += term
    return total


# ---------------------------------------------------------------------------
# text format

def _format_rational(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _format_powers(exps: Monomial, letter: str) -> str:
    parts = []
    for i, e in enumerate(exps):
        if e == 1:
            parts.append(f"{letter}{i}")
        elif e > 1:
            parts.append(f"{letter}{i}^{e}")
    return "*".join(parts)


def format_form(F: Form) -> str:
    """Canonical text: graded-lex order, no spaces, unit coefficients elided."""
    if not F._coeffs:
        return "0"
    letter = F.variance.letter
    out = []
    for k, (exps, c) in enumerate(F.terms()):
        sign = "-" if c < 0 else ("+" if k else "")
        a = abs(c)
        powers = _format_powers(exps, letter)
        if not powers:
            body = _format_rational(a)
        elif a == 1:
            body = powers
        else:
            body = f"{_format_rational(a)}*{powers}"
        out.append(sign + body)
    return "".join(out)


_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<var>[xy]\d)|(?P<op>[-+*/^]))")


def _tokenize(text: str):
    pos = 0
    tokens = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            skip = len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[pos + skip]!r}", text, pos + skip)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, nvars: int, variance: Variance):
        self.text = text
        self.nvars = nvars
        self.variance = variance
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, msg, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, self.text, tok[2])

    def expect_int(self) -> int:
        tok = self.take()
        if tok[0] != "int":
            self.fail("expected integer", tok)
        return int(tok[1])

    def parse(self):
        terms = []
        sign = 1
        if self.peek()[:2] == ("op", "-"):
            self.take()
            sign = -1
        terms.append(self.term(sign))
        while True:
            tok = self.peek()
            if tok[0] == "end":
                break
            if tok[0] == "op" and tok[1] in "+-":
                self.take()
                terms.append(self.term(-1 if tok[1] == "-" else 1))
            else:
                self.fail("expected '+' or '-'")
        return terms

    def term(self, sign):
        tok = self.peek()
        coeff = Fraction(sign)
        exps = [0] * self.nvars
        start = tok[2]
        if tok[0] == "int":
            num = self.expect_int()
            den = 1
            if self.peek()[:2] == ("op", "/"):
                self.take()
                den_tok = self.peek()
                den = self.expect_int()
                if den == 0:
                    self.fail("zero denominator", den_tok)
            coeff *= Fraction(num, den)
            if self.peek()[:2] != ("op", "*"):
                return coeff, exps, start
            self.take()
            self.var(exps)
        elif tok[0] == "var":
            self.var(exps)
        else:
            self.fail("expected coefficient or variable")
        while self.peek()[:2] == ("op", "*"):
            self.take()
            self.var(exps)
        return coeff, exps, start

    def var(self, exps):
        tok = self.take()
        if tok[0] != "var":
            self.fail("expected variable", tok)
        letter, idx = tok[1][0], int(tok[1][1:])
        if letter != self.variance.letter:
            self.fail(
                f"variable {tok[1]} does not match {self.variance.name} variance "
                f"(expected {self.variance.letter}0..{self.variance.letter}9)",
                tok,
            )
        if idx >= self.nvars:
            self.fail(f"variable index {idx} out of range for nvars={self.nvars}", tok)
        e = 1
        if self.peek()[:2] == ("op", "^"):
            self.take()
            e = self.expect_int()
        exps[idx] += e


def parse(text: str, nvars: int, variance: Variance = Variance.PRIMAL, degree: int | None = None) -> Form:
    """Parse the canonical polynomial grammar into a :class:`Form`.

    ``degree`` is only needed to give the zero form a degree; otherwise it
    is inferred from the terms and checked if supplied.
    """
    if not 1 <= nvars <= MAX_VARS:
        raise FormError(f"nvars must be in 1..{MAX_VARS}")
    p = _Parser(text, nvars, variance)
    if p.peek()[0] == "end":
        raise ParseError("empty input", text, 0)
    coeffs: dict = {}
    deg = degree
    for c, exps, start in p.parse():
        d = sum(exps)
        if c == 0:
            continue
        if deg is None:
            deg = d
        elif d != deg:
            raise ParseError(f"term of degree {d} in a form of degree {deg}", text, start)
        key = tuple(exps)
        coeffs[key] = coeffs.get(key, Fraction(0)) + c
    return Form(nvars, deg or 0, variance, coeffs)


def infer_variance(text: str) -> Variance:
    """Pick the variance from the variable letters used in ``text``."""
    has_x = "x" in text
    has_y = "y" in text
    if has_x and has_y:
        raise ParseError("mixed x and y variables", text, text.index("y"))
    return Variance.DUAL if has_y else Variance.PRIMAL


def linear_forms(points: Iterable[Sequence[Rational]], variance: Variance) -> list:
    return [Form.linear(p, variance) for p in points]
