"""Expected Waring ranks and secant dimensions of Veronese varieties.

The secant dimension is measured with Terracini's lemma: at n random points
the tangent span of the n-secant variety is spanned by ``H_i^(m-1) * x_j``.
Its exact rank over the integers is computed with Bareiss elimination.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from math import comb
from typing import List, Sequence, Tuple

from .exactla import integer_rank
from .forms import monomial_basis, multinomial

COORD_RANGE = 50
DEFAULT_MAX_COLUMNS = 80


def expected_rank(m: int, v: int) -> int:
    """Ceiling of C(m+v, m) / (v+1)."""
    if m < 1 or v < 1:
        raise ValueError("m and v must be positive")
    N = comb(m + v, m)
    return -(-N // (v + 1))


def expected_dim_vsp(m: int, v: int, n: int) -> int:
    if m < 1 or v < 1 or n < 0:
        raise ValueError("m, v must be positive and n non-negative")
    return (v + 1) * n - comb(m + v, m)


@dataclass(frozen=True)
class TerraciniSample:
    m: int
    v: int
    n: int
    seeds: Tuple[int, int]
    ranks: Tuple[int, int]
    redraws: int

    @property
    def dim(self) -> int:
        return max(self.ranks)

    @property
    def expected(self) -> int:
        return min(self.n * (self.v + 1), comb(self.m + self.v, self.m))

    @property
    def defect(self) -> int:
        return self.expected - self.dim


def _draw_points(rng: random.Random, n: int, nvars: int):
    """n pairwise non-proportional nonzero integer vectors; returns (points, redraws)."""
    pts: List[Tuple[int, ...]] = []
    redraws = 0
    while len(pts) < n:
        p = tuple(rng.randint(-COORD_RANGE, COORD_RANGE) for _ in range(nvars))
        if not any(p) or any(_proportional(p, q) for q in pts):
            redraws += 1
            continue
        pts.append(p)
    return pts, redraws


def _proportional(p, q) -> bool:
    n = len(p)
    return all(p[i] * q[j] == p[j] * q[i] for i in range(n) for j in range(i + 1, n))


def _power_coeffs(h: Sequence[int], d: int) -> dict:
    out = {}
    for e in monomial_basis(len(h), d):
        c = multinomial(e)
        for hi, ei in zip(h, e):
            if ei:
                c *= hi**ei
        if c:
            out[e] = c
    return out


def terracini_matrix(m: int, points: Sequence[Sequence[int]]) -> List[List[int]]:
    """Rows are coefficient vectors of ``H_i^(m-1) * x_j``."""
    nvars = len(points[0])
    basis = monomial_basis(nvars, m)
    col = {e: i for i, e in enumerate(basis)}
    rows = []
    for h in points:
        base = _power_coeffs(h, m - 1)
        for j in range(nvars):
            row = [0] * len(basis)
            for e, c in base.items():
                shifted = tuple(x + (1 if i == j else 0) for i, x in enumerate(e))
                row[col[shifted]] += c
            rows.append(row)
    return rows


def terracini_sample(m: int, v: int, n: int, seed: int) -> TerraciniSample:
    """Exact Terracini ranks at two independent seeded draws."""
    if n < 1:
        raise ValueError("n must be positive")
    seeds = (seed, seed + 0x9E3779B9)
    ranks = []
    redraws = 0
    for s in seeds:
        pts, r = _draw_points(random.Random(s), n, v + 1)
        redraws += r
        ranks.append(integer_rank(terracini_matrix(m, pts)))
    return TerraciniSample(m, v, n, seeds, tuple(ranks), redraws)


def terracini_dim(m: int, v: int, n: int, seed: int = 0) -> int:
    """Affine dimension of the n-secant span (max over two seeded draws)."""
    return terracini_sample(m, v, n, seed).dim


@dataclass(frozen=True)
class TerraciniRow:
    n: int
    expected_dim: int
    computed_dim: int
    defect: int
    seeds: Tuple[int, int] = (0, 0)


@dataclass
class RankReport:
    m: int
    v: int
    expected_rank: int
    N: int
    terracini_results: List[TerraciniRow] = field(default_factory=list)
    exceptional: bool = False
    generic_rank: int | None = None
    redraws: int = 0


def rank_report(m: int, v: int, seed: int = 0, max_columns: int = DEFAULT_MAX_COLUMNS) -> RankReport:
    """Terracini ranks at n = expected - 1, expected, ... until the span fills."""
    N = comb(m + v, m)
    if N > max_columns:
        raise ValueError(f"C({m + v},{m}) = {N} columns exceeds the budget of {max_columns}")
    n0 = expected_rank(m, v)
    rep = RankReport(m, v, n0, N)
    n = max(n0 - 1, 1)
    while True:
        smp = terracini_sample(m, v, n, seed)
        rep.redraws += smp.redraws
        rep.terracini_results.append(TerraciniRow(n, smp.expected, smp.dim, smp.defect, smp.seeds))
        if smp.dim == N:
            rep.generic_rank = n
            break
        n += 1
    rep.exceptional = any(r.defect > 0 for r in rep.terracini_results)
    return rep


def ah_table(
    max_m: int,
    max_v: int,
    seed: int = 0,
    extra: Sequence[Tuple[int, int]] = (),
    max_columns: int = DEFAULT_MAX_COLUMNS,
) -> List[RankReport]:
    """Rank reports for 2 <= m <= max_m, 1 <= v <= max_v plus any ``extra`` pairs."""
    pairs = [(m, v) for m in range(2, max_m + 1) for v in range(1, max_v + 1)]
    pairs += [p for p in extra if p not in pairs]
    return [rank_report(m, v, seed, max_columns) for m, v in pairs]
