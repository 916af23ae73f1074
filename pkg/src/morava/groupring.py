"""Galois-twisted group rings W_phi[Q] over a finite quotient Q, and induced coset modules.

Scalars move past group elements by Frobenius: g * w = w^phi(g) * g.  Coefficients
are W mod 2^N, stored sparsely as id -> (a0, a1).
"""

from __future__ import annotations

from typing import Callable, Iterable, Mapping

import numpy as np

from .gtwo import GElt
from .quotients import QuotientGroup, q_cosets
from .witt import WittApprox, inv_mod2k

Coef = tuple[int, int]


class RingMismatch(ValueError):
    pass


class NoGaloisStructure(ValueError):
    pass


def _cmul(x: Coef, y: Coef) -> Coef:
    p = x[1] * y[1]
    return x[0] * y[0] - p, x[0] * y[1] + x[1] * y[0] - p


def _csig(x: Coef) -> Coef:
    return x[0] - x[1], -x[1]


def _as_coef(w: "WittApprox | int | Coef") -> Coef:
    if isinstance(w, WittApprox):
        return (w.a0, w.a1)
    if isinstance(w, int):
        return (w, 0)
    return (int(w[0]), int(w[1]))


class RingElt:
    __slots__ = ("Q", "prec", "c")

    def __init__(self, Q: QuotientGroup, prec: int, coeffs: Mapping[int, "Coef | WittApprox | int"] | None = None):
        self.Q = Q
        self.prec = prec
        m = (1 << prec) - 1
        c: dict[int, Coef] = {}
        for g, w in (coeffs or {}).items():
            a0, a1 = _as_coef(w)
            a0 &= m
            a1 &= m
            if a0 or a1:
                c[int(g)] = (a0, a1)
        self.c = c

    # -- construction helpers --------------------------------------------
    def _new(self, acc: dict) -> "RingElt":
        return RingElt(self.Q, self.prec, acc)

    def _check(self, other: "RingElt") -> None:
        if other.Q is not self.Q:
            raise RingMismatch("elements live over different quotients")
        if other.prec != self.prec:
            raise RingMismatch(f"precision {self.prec} vs {other.prec}")

    @property
    def coeffs(self) -> dict[int, WittApprox]:
        return {g: WittApprox(a0, a1, self.prec) for g, (a0, a1) in sorted(self.c.items())}

    # -- arithmetic ------------------------------------------------------
    def __add__(self, other: "RingElt | int") -> "RingElt":
        if isinstance(other, int):
            other = r_scalar(self.Q, other, self.prec)
        self._check(other)
        acc = dict(self.c)
        for g, w in other.c.items():
            a = acc.get(g, (0, 0))
            acc[g] = (a[0] + w[0], a[1] + w[1])
        return self._new(acc)

    __radd__ = __add__

    def __neg__(self) -> "RingElt":
        return self._new({g: (-w[0], -w[1]) for g, w in self.c.items()})

    def __sub__(self, other: "RingElt | int") -> "RingElt":
        if isinstance(other, int):
            other = r_scalar(self.Q, other, self.prec)
        return self + (-other)

    def __rsub__(self, other: int) -> "RingElt":
        return r_scalar(self.Q, other, self.prec) - self

    def __mul__(self, other: "RingElt | int | WittApprox") -> "RingElt":
        if isinstance(other, RingElt):
            return r_mul(self, other)
        if isinstance(other, int):
            return self._new({g: (w[0] * other, w[1] * other) for g, w in self.c.items()})
        return r_mul(self, r_scalar(self.Q, other, self.prec))

    def __rmul__(self, other: "int | WittApprox") -> "RingElt":
        if isinstance(other, int):
            return self * other
        return r_mul(r_scalar(self.Q, other, self.prec), self)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RingElt):
            return NotImplemented
        return other.Q is self.Q and other.prec == self.prec and other.c == self.c

    def __hash__(self) -> int:
        return hash((id(self.Q), self.prec, tuple(sorted(self.c.items()))))

    def is_zero(self) -> bool:
        return not self.c

    def support(self) -> list[int]:
        return sorted(self.c)

    def all_even(self) -> bool:
        return all(w[0] % 2 == 0 and w[1] % 2 == 0 for w in self.c.values())

    def __repr__(self) -> str:
        terms = ", ".join(f"{g}:({hex(a0)},{hex(a1)})" for g, (a0, a1) in sorted(self.c.items()))
        return f"RingElt[{self.Q.variant} M={self.Q.M} mod 2^{self.prec}]{{{terms}}}"

    # -- vector form -----------------------------------------------------
    def to_vector(self) -> np.ndarray:
        v = np.zeros(2 * len(self.Q), dtype=np.int64)
        for g, (a0, a1) in self.c.items():
            v[2 * g] = a0
            v[2 * g + 1] = a1
        return v

    @classmethod
    def from_vector(cls, Q: QuotientGroup, prec: int, v: np.ndarray) -> "RingElt":
        nz = np.nonzero(v.reshape(-1, 2).any(axis=1))[0]
        return cls(Q, prec, {int(g): (int(v[2 * g]), int(v[2 * g + 1])) for g in nz})


def r_zero(Q: QuotientGroup, prec: int) -> RingElt:
    return RingElt(Q, prec)


def r_scalar(Q: QuotientGroup, w: "WittApprox | int", prec: int) -> RingElt:
    return RingElt(Q, prec, {Q.identity: _as_coef(w)})


def r_group(Q: QuotientGroup, g: int, prec: int, w: "WittApprox | int" = 1) -> RingElt:
    return RingElt(Q, prec, {g: _as_coef(w)})


def r_gelt(Q: QuotientGroup, g: GElt, prec: int) -> RingElt:
    return r_group(Q, Q.id_of(g), prec)


def r_mul(x: RingElt, y: RingElt) -> RingElt:
    x._check(y)
    Q = x.Q
    acc: dict[int, Coef] = {}
    ysig = {h: _csig(w) for h, w in y.c.items()}
    for g, wg in x.c.items():
        tw = ysig if Q.flags[g] else y.c
        for h, wh in tw.items():
            p = _cmul(wg, wh)
            k = Q.mul(g, h)
            a = acc.get(k)
            acc[k] = p if a is None else (a[0] + p[0], a[1] + p[1])
    return x._new(acc)


def r_conj_group(x: RingElt, g: int) -> RingElt:
    """g * x * g^-1."""
    Q = x.Q
    gi = Q.inv(g)
    flip = Q.flags[g]
    return x._new({Q.mul(Q.mul(g, h), gi): (_csig(w) if flip else w) for h, w in x.c.items()})


def r_conj_key(x: RingElt, key: tuple) -> RingElt:
    """Conjugation by an element given by key; it may lie outside the table (e.g. pi)."""
    Q = x.Q
    ring = Q.ring
    ki = ring.inv(key)
    flip = key[4]
    out = {}
    for h, w in x.c.items():
        k = ring.mul(ring.mul(key, Q.keys[h]), ki)
        out[Q.id_of_key(k)] = _csig(w) if flip else w
    return x._new(out)


def r_sigma(x: RingElt, by: int | None = None) -> RingElt:
    """x^sigma: conjugation by a flag-one element, (1, 1) unless another id is given.

    Any flag-one element acts by Frobenius on coefficients; the choice only
    changes how group parts move.
    """
    Q = x.Q
    if not Q.galois:
        raise NoGaloisStructure(f"{Q.variant} has no Galois element")
    if by is not None:
        if not Q.flags[by]:
            raise ValueError("the conjugating element must have Galois flag 1")
        return r_conj_group(x, by)
    return x._new({Q.sigma(h): _csig(w) for h, w in x.c.items()})


def r_tr_sigma(x: RingElt, by: int | None = None) -> RingElt:
    """-(zeta x + zeta^sigma x^sigma)."""
    zeta = WittApprox(0, 1, x.prec)
    zeta_s = WittApprox(-1, -1, x.prec)
    return -(zeta * x + zeta_s * r_sigma(x, by))


def r_tr_c3(x: RingElt, omega: int) -> RingElt:
    Q = x.Q
    w2 = Q.mul(omega, omega)
    return x + r_conj_group(x, omega) + r_conj_group(x, w2)


def r_augment(x: RingElt) -> WittApprox:
    a0 = sum(w[0] for w in x.c.values())
    a1 = sum(w[1] for w in x.c.values())
    return WittApprox(a0, a1, x.prec)


def r_antipode(x: RingElt) -> RingElt:
    """chi(sum w_g g) = sum g^-1 w_g = sum w_g^phi(g) g^-1."""
    Q = x.Q
    return x._new({Q.inv(g): (_csig(w) if Q.flags[g] else w) for g, w in x.c.items()})


def r_sum(Q: QuotientGroup, ids: Iterable[int], prec: int) -> RingElt:
    return RingElt(Q, prec, {g: (1, 0) for g in ids})


def third(prec: int) -> int:
    return inv_mod2k(3, prec)


# -- induced coset modules ------------------------------------------------


class CosetModule:
    """W induced up from a finite subgroup H: a W-module with basis the left cosets xH."""

    def __init__(self, Q: QuotientGroup, H: frozenset, name: str = "H"):
        if Q.identity not in H:
            raise ValueError("H must contain the identity")
        self.Q = Q
        self.H = frozenset(H)
        self.name = name
        self.reps, self.coset_of = q_cosets(Q, self.H)
        self._perm: dict[int, np.ndarray] = {}

    def __len__(self) -> int:
        return len(self.reps)

    @property
    def dim(self) -> int:
        return 2 * len(self.reps)

    def base(self) -> int:
        return int(self.coset_of[self.Q.identity])

    def coset_perm(self, g: int) -> np.ndarray:
        p = self._perm.get(g)
        if p is None:
            p = np.array([self.coset_of[self.Q.mul(g, r)] for r in self.reps], dtype=np.int64)
            self._perm[g] = p
        return p


class CosetModuleElt:
    __slots__ = ("mod", "prec", "c")

    def __init__(self, mod: CosetModule, prec: int, coeffs: Mapping[int, "Coef | WittApprox | int"] | None = None):
        self.mod = mod
        self.prec = prec
        m = (1 << prec) - 1
        c: dict[int, Coef] = {}
        for x, w in (coeffs or {}).items():
            a0, a1 = _as_coef(w)
            a0 &= m
            a1 &= m
            if a0 or a1:
                c[int(x)] = (a0, a1)
        self.c = c

    @property
    def coeffs(self) -> dict[int, WittApprox]:
        return {x: WittApprox(a0, a1, self.prec) for x, (a0, a1) in sorted(self.c.items())}

    def __add__(self, other: "CosetModuleElt") -> "CosetModuleElt":
        if other.mod is not self.mod or other.prec != self.prec:
            raise RingMismatch("module mismatch")
        acc = dict(self.c)
        for x, w in other.c.items():
            a = acc.get(x, (0, 0))
            acc[x] = (a[0] + w[0], a[1] + w[1])
        return CosetModuleElt(self.mod, self.prec, acc)

    def __neg__(self) -> "CosetModuleElt":
        return CosetModuleElt(self.mod, self.prec, {x: (-w[0], -w[1]) for x, w in self.c.items()})

    def __sub__(self, other: "CosetModuleElt") -> "CosetModuleElt":
        return self + (-other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CosetModuleElt):
            return NotImplemented
        return other.mod is self.mod and other.prec == self.prec and other.c == self.c

    def is_zero(self) -> bool:
        return not self.c

    def to_vector(self) -> np.ndarray:
        v = np.zeros(self.mod.dim, dtype=np.int64)
        for x, (a0, a1) in self.c.items():
            v[2 * x] = a0
            v[2 * x + 1] = a1
        return v

    @classmethod
    def from_vector(cls, mod: CosetModule, prec: int, v: np.ndarray) -> "CosetModuleElt":
        nz = np.nonzero(v.reshape(-1, 2).any(axis=1))[0]
        return cls(mod, prec, {int(x): (int(v[2 * x]), int(v[2 * x + 1])) for x in nz})

    def __repr__(self) -> str:
        terms = ", ".join(f"{x}:({hex(a0)},{hex(a1)})" for x, (a0, a1) in sorted(self.c.items()))
        return f"CosetModuleElt[{self.mod.name}]{{{terms}}}"


def m_generator(mod: CosetModule, prec: int) -> CosetModuleElt:
    """The canonical generator [H]."""
    return CosetModuleElt(mod, prec, {mod.base(): (1, 0)})


def m_act(x: RingElt, v: CosetModuleElt) -> CosetModuleElt:
    """g * (w [y]) = w^phi(g) [g y]."""
    mod = v.mod
    if x.Q is not mod.Q or x.prec != v.prec:
        raise RingMismatch("ring and module do not match")
    Q = x.Q
    acc: dict[int, Coef] = {}
    vsig = {c: _csig(w) for c, w in v.c.items()}
    for g, wg in x.c.items():
        perm = mod.coset_perm(g)
        tw = vsig if Q.flags[g] else v.c
        for c, wc in tw.items():
            p = _cmul(wg, wc)
            t = int(perm[c])
            a = acc.get(t)
            acc[t] = p if a is None else (a[0] + p[0], a[1] + p[1])
    return CosetModuleElt(mod, v.prec, acc)


def m_augment(v: CosetModuleElt) -> WittApprox:
    a0 = sum(w[0] for w in v.c.values())
    a1 = sum(w[1] for w in v.c.values())
    return WittApprox(a0, a1, v.prec)


def m_dualize(mod: CosetModule, coset: int, prec: int) -> Callable[[RingElt], RingElt]:
    """The functional [g]^* on elements x*[H]: x -> x * sum_{h in H} h g^-1."""
    Q = mod.Q
    g = mod.reps[coset]
    gi = Q.inv(g)
    tail = RingElt(Q, prec, {Q.mul(h, gi): (1, 0) for h in mod.H})

    def functional(x: RingElt) -> RingElt:
        return r_mul(x, tail)

    return functional


def r_dual_partial1(
    Q: QuotientGroup, d0: CosetModule, d1: CosetModule, delta_phi: RingElt
) -> CosetModuleElt:
    """The element of D1 corresponding to the functional e0^* o d1 under e1 -> e1^*.

    d1(e1) = delta_phi * e0, so the functional sends e1 to delta_phi * N(H0).
    A functional y*e1^* sends e1 to N(H1) * chi(y), so the coefficient of y*e1
    at the coset t^-1 H1 is the coefficient of the value at t, twisted by phi(t).
    The value must be constant along right cosets H1*t; that is asserted.
    """
    prec = delta_phi.prec
    value = m_dualize(d0, d0.base(), prec)(delta_phi)
    acc: dict[int, Coef] = {}
    seen: dict[int, Coef] = {}
    for t in range(len(Q)):
        w = value.c.get(t, (0, 0))
        w = _csig(w) if Q.flags[t] else w
        c = int(d1.coset_of[Q.inv(t)])
        m = (1 << prec) - 1
        w = (w[0] & m, w[1] & m)
        if c in seen:
            if seen[c] != w:
                raise AssertionError("dual value is not induced from H1")
            continue
        seen[c] = w
        acc[c] = w
    return CosetModuleElt(d1, prec, acc)
