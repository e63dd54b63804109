"""Exact rational linear algebra built on fraction-free (Bareiss) elimination."""
from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import List, Optional, Sequence

from .forms import to_scalar


class SingularMatrixError(ArithmeticError):
    def __init__(self, rank: int, size: int):
        self.rank = rank
        self.size = size
        super().__init__(f"matrix is singular: rank {rank} < {size}")


class RationalMatrix:
    """Dense immutable matrix of Fractions."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, entries: Sequence[Sequence], cols: int | None = None):
        data = tuple(tuple(to_scalar(v) if not isinstance(v, Fraction) else v for v in row) for row in entries)
        if cols is None:
            if not data:
                raise ValueError("cannot infer column count of an empty matrix")
            cols = len(data[0])
        if any(len(r) != cols for r in data):
            raise ValueError("ragged matrix")
        self.rows = len(data)
        self.cols = cols
        self._data = data

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls([[Fraction(int(i == j)) for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RationalMatrix":
        return cls([[Fraction(0)] * cols for _ in range(rows)], cols)

    def __getitem__(self, idx):
        i, j = idx
        return self._data[i][j]

    def row(self, i: int):
        return self._data[i]

    def column(self, j: int):
        return tuple(r[j] for r in self._data)

    def tolist(self) -> List[List[Fraction]]:
        return [list(r) for r in self._data]

    @property
    def shape(self):
        return (self.rows, self.cols)

    @property
    def T(self) -> "RationalMatrix":
        return RationalMatrix([self.column(j) for j in range(self.cols)], self.rows)

    def __eq__(self, other):
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self):
        return hash(self._data)

    def __repr__(self):
        body = "; ".join(" ".join(str(v) for v in r) for r in self._data)
        return f"RationalMatrix([{body}])"

    def __matmul__(self, other):
        if isinstance(other, RationalMatrix):
            if self.cols != other.rows:
                raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
            ocols = [other.column(j) for j in range(other.cols)]
            return RationalMatrix(
                [[sum((a * b for a, b in zip(r, c)), Fraction(0)) for c in ocols] for r in self._data],
                other.cols,
            )
        vec = [to_scalar(v) for v in other]
        if len(vec) != self.cols:
            raise ValueError("vector length mismatch")
        return [sum((a * b for a, b in zip(r, vec)), Fraction(0)) for r in self._data]

    def __mul__(self, c):
        c = to_scalar(c)
        return RationalMatrix([[c * v for v in r] for r in self._data], self.cols)

    __rmul__ = __mul__

    def __add__(self, other):
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return RationalMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self._data, other._data)], self.cols)

    def __sub__(self, other):
        return self + (-1) * other

    def is_identity(self) -> bool:
        return self.rows == self.cols and self == RationalMatrix.identity(self.rows)


def _as_matrix(M) -> RationalMatrix:
    return M if isinstance(M, RationalMatrix) else RationalMatrix(M)


def _integer_rows(M: RationalMatrix):
    """Scale each row by the lcm of its denominators; returns (int rows, scales)."""
    rows, scales = [], []
    for r in M._data:
        s = 1
        for v in r:
            s = lcm(s, v.denominator)
        rows.append([int(v * s) for v in r])
        scales.append(s)
    return rows, scales


def bareiss_echelon(rows: List[List[int]], ncols: int | None = None):
    """Fraction-free row echelon form of an integer matrix, in place.

    Pivots are taken on the first nonzero entry of each column.  Returns
    ``(pivot_columns, sign)`` where ``sign`` tracks row swaps.  Only the
    first ``ncols`` columns are used for pivoting (useful for augmented
    systems).  Every intermediate division is exact.
    """
    nrows = len(rows)
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    width = len(rows[0]) if rows else 0
    pivots = []
    sign = 1
    prev = 1
    r = 0
    for c in range(ncols):
        if r >= nrows:
            break
        p = next((i for i in range(r, nrows) if rows[i][c]), None)
        if p is None:
            continue
        if p != r:
            rows[r], rows[p] = rows[p], rows[r]
            sign = -sign
        piv = rows[r][c]
        prow = rows[r]
        for i in range(r + 1, nrows):
            row = rows[i]
            a = row[c]
            if a == 0:
                if piv != prev:
                    for j in range(c + 1, width):
                        row[j] = row[j] * piv // prev
            else:
                for j in range(c + 1, width):
                    row[j] = (row[j] * piv - a * prow[j]) // prev
            row[c] = 0
        prev = piv
        pivots.append(c)
        r += 1
    return pivots, sign


def rank(M) -> int:
    M = _as_matrix(M)
    if M.rows == 0 or M.cols == 0:
        return 0
    rows, _ = _integer_rows(M)
    pivots, _ = bareiss_echelon(rows)
    return len(pivots)


def integer_rank(rows: Sequence[Sequence[int]]) -> int:
    """Rank of an integer matrix given as nested lists (no Fraction overhead)."""
    if not rows:
        return 0
    work = [list(r) for r in rows]
    pivots, _ = bareiss_echelon(work)
    return len(pivots)


def det(M) -> Fraction:
    M = _as_matrix(M)
    if M.rows != M.cols:
        raise ValueError("determinant of a non-square matrix")
    n = M.rows
    if n == 0:
        return Fraction(1)
    rows, scales = _integer_rows(M)
    pivots, sign = bareiss_echelon(rows)
    if len(pivots) < n:
        return Fraction(0)
    denom = 1
    for s in scales:
        denom *= s
    return Fraction(sign * rows[n - 1][n - 1], denom)


def _rref(rows: List[List[Fraction]], ncols: int):
    """Reduce a Bareiss echelon form (as Fractions) to reduced row echelon form."""
    ints = []
    for r in rows:
        s = 1
        for v in r:
            s = lcm(s, v.denominator)
        ints.append([int(v * s) for v in r])
    pivots, _ = bareiss_echelon(ints, ncols)
    red = [[Fraction(v) for v in r] for r in ints[: len(pivots)]]
    for k in range(len(pivots) - 1, -1, -1):
        c = pivots[k]
        pv = red[k][c]
        red[k] = [v / pv for v in red[k]]
        for i in range(k):
            f = red[i][c]
            if f:
                red[i] = [a - f * b for a, b in zip(red[i], red[k])]
    return red, pivots


def kernel_basis(M) -> List[List[Fraction]]:
    """Basis of the right null space; each vector's first nonzero entry is 1."""
    M = _as_matrix(M)
    n = M.cols
    if M.rows == 0:
        return [[Fraction(int(i == j)) for i in range(n)] for j in range(n)]
    red, pivots = _rref(M.tolist(), n)
    free = [c for c in range(n) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for k, c in enumerate(pivots):
            v[c] = -red[k][f]
        lead = next(x for x in v if x)
        basis.append([x / lead for x in v])
    return basis


def solve(M, b) -> Optional[List[Fraction]]:
    """One solution of ``M x = b`` (free variables set to zero), or None."""
    M = _as_matrix(M)
    b = [to_scalar(v) for v in b]
    if len(b) != M.rows:
        raise ValueError("right-hand side length mismatch")
    n = M.cols
    aug = [list(r) + [bi] for r, bi in zip(M._data, b)]
    if not aug:
        return [Fraction(0)] * n
    # consistency: the augmented column must not carry a pivot
    ints = []
    for r in aug:
        s = 1
        for v in r:
            s = lcm(s, v.denominator)
        ints.append([int(v * s) for v in r])
    pivots, _ = bareiss_echelon(ints, n + 1)
    if pivots and pivots[-1] == n:
        return None
    red, pivots = _rref(aug, n)
    x = [Fraction(0)] * n
    for k, c in enumerate(pivots):
        x[c] = red[k][n]
    return x


def inverse(M) -> RationalMatrix:
    M = _as_matrix(M)
    if M.rows != M.cols:
        raise ValueError("inverse of a non-square matrix")
    n = M.rows
    aug = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(M._data)]
    red, pivots = _rref(aug, n)
    if len(pivots) < n:
        raise SingularMatrixError(len(pivots), n)
    return RationalMatrix([r[n:] for r in red], n)


def cofactor_det(M) -> Fraction:
    """Laplace expansion along the first row; exponential, meant as an oracle."""
    M = _as_matrix(M)
    if M.rows != M.cols:
        raise ValueError("determinant of a non-square matrix")

    def rec(rows):
        n = len(rows)
        if n == 0:
            return Fraction(1)
        if n == 1:
            return rows[0][0]
        total = Fraction(0)
        for j, a in enumerate(rows[0]):
            if a:
                minor = [r[:j] + r[j + 1 :] for r in rows[1:]]
                total += (-1) ** j * a * rec(minor)
        return total

    return rec([list(r) for r in M._data])
