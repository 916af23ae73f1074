"""The endomorphism ring W<xi>/(xi*w - w^sigma*xi, xi^2 - 2u) of a height-2 formal group over F_4.

Two formal group laws are modelled: Honda (u = +1) and the supersingular
elliptic one (u = -1).  Elements are a + b*xi with a, b in W mod 2^N.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import NamedTuple

from .witt import (
    NotAUnit,
    PrecisionMismatch,
    WittApprox,
    inv_mod2k,
    w_constant,
    w_format,
    w_frobenius,
    w_inv,
    w_val2,
)


class FGLTag(enum.Enum):
    HONDA = "honda"
    ELLIPTIC = "elliptic"

    @property
    def u(self) -> int:
        return 1 if self is FGLTag.HONDA else -1

    @classmethod
    def parse(cls, name: "str | FGLTag") -> "FGLTag":
        if isinstance(name, FGLTag):
            return name
        return cls(name.lower())


HONDA = FGLTag.HONDA
ELLIPTIC = FGLTag.ELLIPTIC


class TagMismatch(ValueError):
    pass


@dataclass(frozen=True)
class EndoElt:
    a: WittApprox
    b: WittApprox
    fgl: FGLTag

    def __post_init__(self) -> None:
        if self.a.prec != self.b.prec:
            raise PrecisionMismatch("coordinates must share a precision")

    @property
    def prec(self) -> int:
        return self.a.prec

    def _check(self, other: "EndoElt") -> None:
        if other.fgl is not self.fgl:
            raise TagMismatch(f"{self.fgl.value} vs {other.fgl.value}")
        if other.prec != self.prec:
            raise PrecisionMismatch(f"precision {self.prec} vs {other.prec}")

    def __mul__(self, other: "EndoElt | WittApprox | int") -> "EndoElt":
        if isinstance(other, int):
            return EndoElt(self.a * other, self.b * other, self.fgl)
        if isinstance(other, WittApprox):
            other = e_scalar(other, self.fgl)
        return e_mul(self, other)

    def __rmul__(self, other: "WittApprox | int") -> "EndoElt":
        if isinstance(other, int):
            return self * other
        return e_mul(e_scalar(other, self.fgl), self)

    def __add__(self, other: "EndoElt") -> "EndoElt":
        self._check(other)
        return EndoElt(self.a + other.a, self.b + other.b, self.fgl)

    def __sub__(self, other: "EndoElt") -> "EndoElt":
        self._check(other)
        return EndoElt(self.a - other.a, self.b - other.b, self.fgl)

    def __neg__(self) -> "EndoElt":
        return EndoElt(-self.a, -self.b, self.fgl)

    def is_unit(self) -> bool:
        return self.a.is_unit()

    def reduce(self, prec: int) -> "EndoElt":
        return EndoElt(self.a.reduce(prec), self.b.reduce(prec), self.fgl)

    def sigma(self) -> "EndoElt":
        """Frobenius on both coordinates, i.e. conjugation by xi."""
        return EndoElt(w_frobenius(self.a), w_frobenius(self.b), self.fgl)

    def __str__(self) -> str:
        return f"({w_format(self.a)}) + ({w_format(self.b)})*xi [{self.fgl.value}]"


def e_scalar(w: WittApprox | int, fgl: FGLTag, prec: int | None = None) -> EndoElt:
    if isinstance(w, int):
        if prec is None:
            raise ValueError("an integer scalar needs a precision")
        w = WittApprox(w, 0, prec)
    return EndoElt(w, WittApprox(0, 0, w.prec), fgl)


def e_one(fgl: FGLTag, prec: int) -> EndoElt:
    return e_scalar(1, fgl, prec)


def e_xi(fgl: FGLTag, prec: int) -> EndoElt:
    return EndoElt(WittApprox(0, 0, prec), WittApprox(1, 0, prec), fgl)


def e_mul(x: EndoElt, y: EndoElt) -> EndoElt:
    x._check(y)
    u = x.fgl.u
    a = x.a * y.a + (x.b * w_frobenius(y.b)) * (2 * u)
    b = x.a * y.b + x.b * w_frobenius(y.a)
    return EndoElt(a, b, x.fgl)


def _det_w(x: EndoElt) -> WittApprox:
    return x.a * w_frobenius(x.a) - (x.b * w_frobenius(x.b)) * (2 * x.fgl.u)


def e_det(x: EndoElt) -> int:
    d = _det_w(x)
    assert d.a1 == 0, "determinant must be rational"
    return d.a0


def e_inv(x: EndoElt) -> EndoElt:
    d = e_det(x)
    if d % 2 == 0:
        raise NotAUnit(f"{x} has even determinant")
    dinv = inv_mod2k(d, x.prec)
    return EndoElt(w_frobenius(x.a) * dinv, -x.b * dinv, x.fgl)


class Level(NamedTuple):
    level: int
    lower_bound: bool


def e_filtration_bound(x: EndoElt) -> Level:
    """Largest i with x = 1 mod xi^i, with a flag when truncation saturates it."""
    if not x.is_unit():
        raise NotAUnit(f"{x} is not a unit")
    n = x.prec
    va = w_val2(x.a - WittApprox(1, 0, n))
    vb = w_val2(x.b)
    la, lb = 2 * va, 2 * vb + 1
    level = min(la, lb)
    lower = (la == level and va == n) or (lb == level and vb == n)
    if level > 2 * n - 1:
        level, lower = 2 * n - 1, True
    return Level(level, lower)


def e_filtration_level(x: EndoElt) -> int:
    return e_filtration_bound(x).level


STANDARD_NAMES = ("i", "j", "k", "omega", "alpha", "pi", "eps", "alpha_i", "alpha_j", "alpha_k")


def e_standard(name: str, fgl: FGLTag | str, prec: int) -> EndoElt:
    fgl = FGLTag.parse(fgl)
    if prec < 3:
        raise ValueError("standard elements need precision at least 3")
    zero = WittApprox(0, 0, prec)
    zeta = w_constant("zeta", prec)
    if name == "omega":
        return EndoElt(zeta, zero, fgl)
    if name == "alpha":
        return EndoElt(w_constant("alpha", prec), zero, fgl)
    if name == "pi":
        return EndoElt(w_constant("pi", prec), zero, fgl)
    if name == "eps":
        eps = w_constant("alpha", prec) if fgl is HONDA else WittApprox(1, 0, prec)
        return EndoElt(eps, zero, fgl)
    if name in ("i", "j", "k"):
        eps = e_standard("eps", fgl, prec).a
        # i, j, k use the twists 1, zeta^2, zeta of eps respectively
        twist = {"i": WittApprox(1, 0, prec), "j": zeta * zeta, "k": zeta}[name]
        pinv = w_inv(w_constant("pi", prec))
        return EndoElt(pinv, -(pinv * twist * eps), fgl)
    if name in ("alpha_i", "alpha_j", "alpha_k"):
        tau = e_standard(name[-1], fgl, prec)
        alpha = e_standard("alpha", fgl, prec)
        return tau * alpha * e_inv(tau) * e_inv(alpha)
    raise KeyError(f"unknown standard element {name!r}")


def e_iso_HE(x: EndoElt) -> EndoElt:
    """Elliptic to Honda: a + b*xi_E maps to a + (b*alpha)*xi_H."""
    if x.fgl is not ELLIPTIC:
        raise TagMismatch("expected an elliptic element")
    alpha = w_constant("alpha", x.prec)
    return EndoElt(x.a, x.b * alpha, HONDA)
