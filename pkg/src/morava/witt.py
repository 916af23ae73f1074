"""Arithmetic in W(F_4) = Z_2[zeta]/(1+zeta+zeta^2), truncated modulo 2^N.

An element a0 + a1*zeta is stored as two residues together with its precision.
Operations never coerce between precisions.
"""

from __future__ import annotations

from dataclasses import dataclass


class PrecisionMismatch(ValueError):
    pass


class NotAUnit(ArithmeticError):
    pass


class NoSquareRoot(ArithmeticError):
    pass


class BadBranch(ValueError):
    pass


@dataclass(frozen=True)
class WittApprox:
    a0: int
    a1: int
    prec: int

    def __post_init__(self) -> None:
        if self.prec < 1:
            raise ValueError("precision must be positive")
        m = (1 << self.prec) - 1
        object.__setattr__(self, "a0", self.a0 & m)
        object.__setattr__(self, "a1", self.a1 & m)

    @property
    def modulus(self) -> int:
        return 1 << self.prec

    def _check(self, other: "WittApprox") -> None:
        if not isinstance(other, WittApprox):
            raise TypeError(f"expected WittApprox, got {type(other).__name__}")
        if other.prec != self.prec:
            raise PrecisionMismatch(f"precision {self.prec} vs {other.prec}")

    def __add__(self, other: "WittApprox") -> "WittApprox":
        self._check(other)
        return WittApprox(self.a0 + other.a0, self.a1 + other.a1, self.prec)

    def __sub__(self, other: "WittApprox") -> "WittApprox":
        self._check(other)
        return WittApprox(self.a0 - other.a0, self.a1 - other.a1, self.prec)

    def __neg__(self) -> "WittApprox":
        return WittApprox(-self.a0, -self.a1, self.prec)

    def __mul__(self, other: "WittApprox | int") -> "WittApprox":
        if isinstance(other, int):
            return WittApprox(self.a0 * other, self.a1 * other, self.prec)
        if not isinstance(other, WittApprox):
            return NotImplemented
        return w_mul(self, other)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return self.a0 == 0 and self.a1 == 0

    def is_unit(self) -> bool:
        return w_norm(self) & 1 == 1

    def reduce(self, prec: int) -> "WittApprox":
        if prec > self.prec:
            raise PrecisionMismatch(f"cannot raise precision {self.prec} to {prec}")
        return WittApprox(self.a0, self.a1, prec)

    def signed(self) -> tuple[int, int]:
        """Coordinates as symmetric residues, handy for printing."""
        h = 1 << (self.prec - 1)
        return tuple(v - self.modulus if v >= h else v for v in (self.a0, self.a1))

    def __str__(self) -> str:
        return w_format(self)


def w_from_int(n: int, prec: int) -> WittApprox:
    return WittApprox(n, 0, prec)


def w_mul(x: WittApprox, y: WittApprox) -> WittApprox:
    x._check(y)
    # zeta^2 = -1 - zeta
    p = x.a1 * y.a1
    return WittApprox(x.a0 * y.a0 - p, x.a0 * y.a1 + x.a1 * y.a0 - p, x.prec)


def w_frobenius(x: WittApprox) -> WittApprox:
    return WittApprox(x.a0 - x.a1, -x.a1, x.prec)


def w_norm(x: WittApprox) -> int:
    """The rational residue x * sigma(x) = a0^2 - a0*a1 + a1^2 mod 2^N."""
    return (x.a0 * x.a0 - x.a0 * x.a1 + x.a1 * x.a1) % x.modulus


def inv_mod2k(n: int, k: int) -> int:
    """Inverse of an odd integer modulo 2^k by Newton lifting from n^-1 = 1 mod 2."""
    if n % 2 == 0:
        raise NotAUnit(f"{n} is even")
    m = (1 << k) - 1
    r = 1
    bits = 1
    while bits < k:
        r = (r * (2 - n * r)) & m
        bits *= 2
    return r & m


def w_inv(x: WittApprox) -> WittApprox:
    nrm = w_norm(x)
    if nrm % 2 == 0:
        raise NotAUnit(f"{w_format(x)} has even norm")
    return w_frobenius(x) * inv_mod2k(nrm, x.prec)


def w_val2(x: WittApprox) -> int:
    """min of the 2-adic valuations of the coordinates; N for the zero residue."""
    v = x.prec
    for c in (x.a0, x.a1):
        if c:
            v = min(v, (c & -c).bit_length() - 1)
    return v


def _sqrt_2adic(t: int, branch: int, k: int) -> int:
    # Newton iteration s <- s - (s^2 - t)/(2s) on residues mod 2^w.  Once s
    # agrees with the 2-adic root r mod 2^(w-1), s^2 - t = (s-r)(s+r) vanishes
    # mod 2^w because s + r has valuation exactly 1.
    w = k + 4
    mod = 1 << w
    s = branch % 8
    h = inv_mod2k(s, w)
    while True:
        err = (s * s - t) % mod
        if err == 0:
            return s % (1 << k)
        s = (s - (err >> 1) * h) % mod
        h = (h * (2 - s * h)) % mod


def w_sqrt_hensel(t: int, branch: int, prec: int) -> WittApprox:
    """The 2-adic square root of t congruent to branch mod 8, reduced mod 2^prec."""
    if t % 8 != 1:
        raise NoSquareRoot(f"{t} is not 1 mod 8")
    # The two roots of t are +r and -r.  Their classes mod 8 are {1, 7} when
    # t = 1 mod 16 and {3, 5} when t = 9 mod 16.
    allowed = (1, 7) if t % 16 == 1 else (3, 5)
    if branch % 8 not in allowed:
        raise BadBranch(f"no square root of {t} is {branch} mod 8")
    return WittApprox(_sqrt_2adic(t, branch, prec), 0, prec)


CONSTANT_NAMES = ("zeta", "pi", "sqrt_m7", "alpha")


def w_constant(name: str, prec: int) -> WittApprox:
    if prec < 3:
        raise ValueError("constants need precision at least 3")
    if name == "zeta":
        return WittApprox(0, 1, prec)
    if name == "pi":
        return WittApprox(1, 2, prec)
    if name == "sqrt_m7":
        return w_sqrt_hensel(-7, 5, prec)
    if name == "alpha":
        return w_mul(WittApprox(1, -2, prec), w_inv(w_sqrt_hensel(-7, 5, prec)))
    raise KeyError(f"unknown constant {name!r}")


def w_hex(x: WittApprox) -> tuple[str, str]:
    return hex(x.a0), hex(x.a1)


def w_format(x: WittApprox) -> str:
    """Hex residues with an explicit modulus, e.g. '0x1 + 0x2*zeta mod 2^4'."""
    if x.a1 == 0:
        return f"{hex(x.a0)} mod 2^{x.prec}"
    return f"{hex(x.a0)} + {hex(x.a1)}*zeta mod 2^{x.prec}"
