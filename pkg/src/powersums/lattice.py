"""Divisor classes on the plane blown up at s points.

A class ``a*h - sum m_i e_i`` is a :class:`SurfaceClass`; the pairing is
``h^2 = 1``, ``e_i^2 = -1`` and all mixed products zero.  The surface
reported by :func:`surface_invariants` is the plane blown up at
``(d-2)(d-3)/2`` points, embedded by curves of degree ``d-3`` through them,
together with its discriminant curve and the degrees of the associated
trigonal curve and theta characteristic.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass
from fractions import Fraction
from math import comb
from typing import Tuple


class LatticeError(ValueError):
    pass


@dataclass(frozen=True)
class SurfaceClass:
    a: int
    m: Tuple[int, ...]

    @classmethod
    def uniform(cls, a: int, mult: int, s: int) -> "SurfaceClass":
        return cls(a, (mult,) * s)

    @property
    def s(self) -> int:
        return len(self.m)

    def __add__(self, other: "SurfaceClass") -> "SurfaceClass":
        _check(self, other)
        return SurfaceClass(self.a + other.a, tuple(x + y for x, y in zip(self.m, other.m)))

    def __neg__(self) -> "SurfaceClass":
        return SurfaceClass(-self.a, tuple(-x for x in self.m))

    def __sub__(self, other: "SurfaceClass") -> "SurfaceClass":
        return self + (-other)

    def __rmul__(self, k: int) -> "SurfaceClass":
        return SurfaceClass(k * self.a, tuple(k * x for x in self.m))

    def __str__(self) -> str:
        out = f"{self.a}h"
        if self.m and len(set(self.m)) == 1:
            x = self.m[0]
            return out + f" {'-' if x >= 0 else '+'} {abs(x)}*sum(e_1..e_{self.s})"
        for i, x in enumerate(self.m):
            if x:
                out += f" {'-' if x > 0 else '+'} {abs(x)}e_{i + 1}"
        return out


def _check(D1: SurfaceClass, D2: SurfaceClass) -> None:
    if D1.s != D2.s:
        raise LatticeError(f"classes live on different blow-ups (s={D1.s} vs s={D2.s})")


def intersect(D1: SurfaceClass, D2: SurfaceClass) -> int:
    _check(D1, D2)
    return D1.a * D2.a - sum(x * y for x, y in zip(D1.m, D2.m))


def canonical(s: int) -> SurfaceClass:
    return SurfaceClass(-3, (-1,) * s)


def pa(D: SurfaceClass) -> int:
    """Arithmetic genus by adjunction."""
    K = canonical(D.s)
    return (intersect(D, D) + intersect(D, K)) // 2 + 1


def chi(D: SurfaceClass) -> int:
    """Euler characteristic of O(D) by Riemann-Roch (chi(O) = 1)."""
    K = canonical(D.s)
    return 1 + (intersect(D, D) - intersect(D, K)) // 2


def hurwitz_genus(d: int) -> int:
    """Genus of a simply ramified triple cover of P^1 with 2d branch points."""
    if d < 2:
        raise LatticeError("d must be at least 2")
    # 2g - 2 = 3 * (-2) + 2d
    two_g = 3 * (-2) + 2 * d + 2
    return two_g // 2


@dataclass(frozen=True)
class SurfaceReport:
    d: int
    s: int
    n: int
    g: int
    class_Dl: SurfaceClass
    class_Dq: SurfaceClass
    class_Gamma: SurfaceClass
    class_K: SurfaceClass
    Dl_squared: int
    deg_Gamma: int
    pa_Gamma: int
    chi_Dl: int
    h0_Dl: int
    deg_theta: int
    n_equals_dimS2: bool
    h1_vanishing_assumed: bool = True

    def to_record(self) -> dict:
        rec = asdict(self)
        for key in ("class_Dl", "class_Dq", "class_Gamma", "class_K"):
            cls = getattr(self, key)
            rec[key] = {"a": cls.a, "m": list(cls.m), "text": str(cls)}
        return rec

    def checks(self) -> dict:
        """Each field recomputed from its closed form."""
        d, g = self.d, self.g
        return {
            "s": self.s == (d - 2) * (d - 3) // 2,
            "n": self.n == (d - 1) * (d - 2) // 2,
            "g_hurwitz": g == hurwitz_genus(d) == d - 2,
            "Dl_squared": self.Dl_squared == (d - 3) * (d - 4) // 2,
            "deg_Gamma": self.deg_Gamma == g * (g - 1),
            "pa_Gamma": self.pa_Gamma == Fraction(3, 2) * g * (g - 1) + 1,
            "chi_Dl": self.chi_Dl == d - 2,
            "deg_theta": 2 * self.deg_theta == 2 * g - 2,
            "n_equals_dimS2": self.n_equals_dimS2 and self.n == comb(d - 1, 2),
            "Dq_is_2Dl": self.class_Dq == 2 * self.class_Dl,
        }


def surface_invariants(d: int) -> SurfaceReport:
    """Lattice invariants of the blown-up plane attached to a degree-d curve."""
    if d < 5:
        raise LatticeError(f"d must be at least 5, got {d}")
    s = (d - 2) * (d - 3) // 2
    n = (d - 1) * (d - 2) // 2
    g = hurwitz_genus(d)
    Dl = SurfaceClass.uniform(d - 3, 1, s)
    Dq = 2 * Dl
    Gamma = SurfaceClass.uniform(3 * (d - 2), 4, s)
    K = canonical(s)
    chi_Dl = chi(Dl)
    return SurfaceReport(
        d=d,
        s=s,
        n=n,
        g=g,
        class_Dl=Dl,
        class_Dq=Dq,
        class_Gamma=Gamma,
        class_K=K,
        Dl_squared=intersect(Dl, Dl),
        deg_Gamma=intersect(Gamma, Dl),
        pa_Gamma=pa(Gamma),
        chi_Dl=chi_Dl,
        # h^1 = h^2 = 0 is taken on trust, so h^0 = chi
        h0_Dl=chi_Dl,
        # theta is a non-effective theta characteristic: 2 deg = 2g - 2
        deg_theta=g - 1,
        n_equals_dimS2=n == comb(d - 1, 2),
    )
