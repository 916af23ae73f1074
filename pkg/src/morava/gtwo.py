"""The extended group G_2 = D^x / <xi^2>.

An element is a pair (u, e) standing for u * xi^e, where u is a unit of the
endomorphism ring and e is the Galois flag.  Since xi^2 is central and
killed, (u1, e1)(u2, e2) = (u1 * sigma^e1(u2), e1 xor e2).
"""

from __future__ import annotations

from dataclasses import dataclass

from .endo import (
    EndoElt,
    FGLTag,
    TagMismatch,
    e_det,
    e_inv,
    e_mul,
    e_one,
    e_standard,
)
from .witt import NotAUnit, PrecisionMismatch, WittApprox, inv_mod2k


class NotOddValuation(ValueError):
    pass


class _Unbounded:
    def __repr__(self) -> str:
        return "Unbounded"


Unbounded = _Unbounded()


@dataclass(frozen=True)
class GElt:
    u: EndoElt
    e: int = 0

    def __post_init__(self) -> None:
        if self.e not in (0, 1):
            raise ValueError("Galois flag must be 0 or 1")
        if e_det(self.u) % 2 == 0:
            raise NotAUnit("unit part must have odd determinant")

    @property
    def fgl(self) -> FGLTag:
        return self.u.fgl

    @property
    def prec(self) -> int:
        return self.u.prec

    def __mul__(self, other: "GElt") -> "GElt":
        return g_mul(self, other)

    def __str__(self) -> str:
        return f"<{self.u}, flag={self.e}>"


def g_identity(fgl: FGLTag, prec: int) -> GElt:
    return GElt(e_one(fgl, prec), 0)


def g_of(u: EndoElt) -> GElt:
    return GElt(u, 0)


def _sigma_pow(u: EndoElt, e: int) -> EndoElt:
    return u.sigma() if e else u


def g_mul(x: GElt, y: GElt) -> GElt:
    if x.fgl is not y.fgl:
        raise TagMismatch(f"{x.fgl.value} vs {y.fgl.value}")
    if x.prec != y.prec:
        raise PrecisionMismatch(f"precision {x.prec} vs {y.prec}")
    return GElt(e_mul(x.u, _sigma_pow(y.u, x.e)), x.e ^ y.e)


def g_inv(x: GElt) -> GElt:
    inv = e_inv(x.u)
    return GElt(_sigma_pow(inv, x.e), x.e)


def g_conj(h: GElt, x: GElt) -> GElt:
    return g_mul(g_mul(h, x), g_inv(h))


def g_pow(x: GElt, n: int) -> GElt:
    if n < 0:
        return g_pow(g_inv(x), -n)
    result = g_identity(x.fgl, x.prec)
    base = x
    while n:
        if n & 1:
            result = g_mul(result, base)
        base = g_mul(base, base)
        n >>= 1
    return result


def g_is_identity(x: GElt) -> bool:
    return x == g_identity(x.fgl, x.prec)


def g_order(x: GElt, cap: int = 96) -> "int | _Unbounded":
    if cap < 1:
        raise ValueError("cap must be at least 1")
    y = x
    for n in range(1, cap + 1):
        if g_is_identity(y):
            return n
        y = g_mul(y, x)
    return Unbounded


def g_neg(x: GElt) -> GElt:
    return GElt(-x.u, x.e)


def g_proj_equal(x: GElt, y: GElt) -> bool:
    return x == y or x == g_neg(y)


def g_det(x: GElt) -> int:
    return e_det(x.u)


def g_is_norm_one(x: GElt) -> bool:
    d = g_det(x)
    m = 1 << x.prec
    return d == 1 or d == m - 1


def g_from_odd(x: EndoElt) -> GElt:
    """Write x = u * xi with u a unit; the result has precision one lower than x.

    Needs a even and b a unit.  From (b + c*xi)*xi = b*xi + 2u*c we get c = a/(2u).
    """
    n = x.prec
    if x.a.a0 % 2 or x.a.a1 % 2 or not x.b.is_unit():
        raise NotOddValuation(f"{x} is not a unit times xi")
    u = x.fgl.u
    half = WittApprox((x.a.a0 >> 1) * u, (x.a.a1 >> 1) * u, n - 1)
    return GElt(EndoElt(x.b.reduce(n - 1), half, x.fgl), 1)


GSTANDARD_NAMES = ("bracket_1pi", "bracket_jmk", "sigma", "pi0")


def g_standard(name: str, fgl: FGLTag | str, prec: int) -> GElt:
    fgl = FGLTag.parse(fgl)
    if prec < 3:
        raise ValueError("standard elements need precision at least 3")
    if name == "sigma":
        return GElt(e_one(fgl, prec), 1)
    if name == "pi0":
        return GElt(e_standard("pi", fgl, prec), 0)
    if name == "bracket_1pi":
        i = e_standard("i", fgl, prec + 1)
        return g_from_odd(e_one(fgl, prec + 1) + i)
    if name == "bracket_jmk":
        j = GElt(e_standard("j", fgl, prec), 0)
        return g_mul(j, g_standard("bracket_1pi", fgl, prec))
    raise KeyError(f"unknown group element {name!r}")


def g_element(name: str, fgl: FGLTag | str, prec: int) -> GElt:
    """Named element of G_2: a ring standard element with flag 0 or a group standard."""
    if name in GSTANDARD_NAMES:
        return g_standard(name, fgl, prec)
    if name == "e":
        return g_identity(FGLTag.parse(fgl), prec)
    return GElt(e_standard(name, fgl, prec), 0)


def det_inverse(x: GElt) -> int:
    return inv_mod2k(g_det(x), x.prec)
