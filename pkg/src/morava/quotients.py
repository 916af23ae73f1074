"""Finite quotients S_2/F_{M/2} and their projective, Galois and norm-one variants.

F_{M/2} = 1 + xi^M End, and the two-sided ideal xi^M End consists of the
a + b*xi with 2^ceil(M/2) | a and 2^floor(M/2) | b.  So a class is pinned down
by the key (a mod 2^c, b mod 2^f, flag) with c = ceil(M/2), f = floor(M/2),
and products are computed directly on keys.  Digit normal forms

    g = omega^e * (1 + t(a_1) xi) * (1 + t(a_2) xi^2) * ... * (1 + t(a_{M-1}) xi^{M-1})

(t the Teichmueller lift) are derived from keys by peeling one digit at a time.
"""

from __future__ import annotations

import itertools
import os
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .endo import EndoElt, FGLTag, e_det, e_standard
from .gtwo import GElt
from .subgroups import sg_standard
from .witt import WittApprox, inv_mod2k, w_sqrt_hensel

VARIANTS = ("S2", "PS2", "G2", "PG2")
MAX_DEPTH = 8

Key = tuple  # (a0, a1, b0, b1, flag)


class InsufficientPrecision(ValueError):
    pass


class DepthCapExceeded(ValueError):
    pass


class VariantMismatch(ValueError):
    pass


def depth_cap() -> int:
    env = os.environ.get("MORAVA_MAX_DEPTH")
    if env:
        return min(MAX_DEPTH, int(env))
    return MAX_DEPTH


def det_bits(M: int) -> int:
    """det is constant on F_{M/2}-cosets modulo 2^ceil(M/2)."""
    return (M + 1) // 2


# F_4 digits are encoded 0, 1, 2 = zeta, 3 = zeta + 1 (code = c0 + 2*c1).
DIGIT_NAMES = ("0", "1", "z", "z+1")
_TEICH = {0: (0, 0), 1: (1, 0), 2: (0, 1), 3: (-1, -1)}  # zeta + 1 = zeta^2 mod 2


@dataclass(frozen=True)
class DigitForm:
    omega_exp: int
    digits: tuple[int, ...]
    galois_flag: int | None = None

    def __str__(self) -> str:
        s = f"{self.omega_exp}:{''.join(str(d) for d in self.digits)}"
        if self.galois_flag is not None:
            s += f":{self.galois_flag}"
        return s

    @classmethod
    def parse(cls, s: str) -> "DigitForm":
        parts = s.split(":")
        if len(parts) not in (2, 3):
            raise ValueError(f"bad digit form {s!r}")
        flag = int(parts[2]) if len(parts) == 3 else None
        return cls(int(parts[0]), tuple(int(c) for c in parts[1]), flag)


def _wmul(x0: int, x1: int, y0: int, y1: int) -> tuple[int, int]:
    p = x1 * y1
    return x0 * y0 - p, x0 * y1 + x1 * y0 - p


def _wsig(x0: int, x1: int) -> tuple[int, int]:
    return x0 - x1, -x1


class KeyRing:
    """Arithmetic of units of End/(xi^M) on residue keys."""

    def __init__(self, M: int, fgl: FGLTag):
        self.M = M
        self.fgl = fgl
        self.u = fgl.u
        self.c = (M + 1) // 2
        self.f = M // 2
        self.ma = (1 << self.c) - 1
        self.mb = (1 << self.f) - 1

    def norm(self, a0: int, a1: int, b0: int, b1: int, e: int = 0) -> Key:
        return (a0 & self.ma, a1 & self.ma, b0 & self.mb, b1 & self.mb, e)

    def mul(self, x: Key, y: Key) -> Key:
        a0, a1, b0, b1, e1 = x
        c0, c1, d0, d1, e2 = y
        if e1:
            c0, c1 = _wsig(c0, c1)
            d0, d1 = _wsig(d0, d1)
        s0, s1 = _wsig(d0, d1)
        p0, p1 = _wmul(a0, a1, c0, c1)
        q0, q1 = _wmul(b0, b1, s0, s1)
        t0, t1 = _wsig(c0, c1)
        r0, r1 = _wmul(a0, a1, d0, d1)
        v0, v1 = _wmul(b0, b1, t0, t1)
        k = 2 * self.u
        return (
            (p0 + k * q0) & self.ma,
            (p1 + k * q1) & self.ma,
            (r0 + v0) & self.mb,
            (r1 + v1) & self.mb,
            e1 ^ e2,
        )

    def det(self, x: Key) -> int:
        a0, a1, b0, b1, _ = x
        na = a0 * a0 - a0 * a1 + a1 * a1
        nb = b0 * b0 - b0 * b1 + b1 * b1
        return (na - 2 * self.u * nb) & self.ma

    def inv(self, x: Key) -> Key:
        a0, a1, b0, b1, e = x
        dinv = inv_mod2k(self.det(x), self.c)
        s0, s1 = _wsig(a0, a1)
        ia = (s0 * dinv, s1 * dinv)
        ib = (-b0 * dinv, -b1 * dinv)
        if e:
            # (u, 1)^-1 = (sigma(u^-1), 1)
            ia = _wsig(*ia)
            ib = _wsig(*ib)
        return self.norm(ia[0], ia[1], ib[0], ib[1], e)

    def neg(self, x: Key) -> Key:
        return self.norm(-x[0], -x[1], -x[2], -x[3], x[4])

    def sigma(self, x: Key) -> Key:
        a = _wsig(x[0], x[1])
        b = _wsig(x[2], x[3])
        return self.norm(a[0], a[1], b[0], b[1], x[4])

    def one(self, e: int = 0) -> Key:
        return (1, 0, 0, 0, e)

    def omega_pow(self, e: int) -> Key:
        return self.norm(*((1, 0), (0, 1), (-1, -1))[e % 3], 0, 0)

    def digit_factor(self, i: int, d: int) -> Key:
        """1 + t(d) xi^i."""
        t0, t1 = _TEICH[d]
        m, odd = divmod(i, 2)
        s = (2 * self.u) ** m
        if odd:
            return self.norm(1, 0, t0 * s, t1 * s)
        return self.norm(1 + t0 * s, t1 * s, 0, 0)

    def digits(self, x: Key) -> tuple[int, list[int]]:
        """Peel omega exponent and digits a_1..a_{M-1} from the unit part of x."""
        a0, a1 = x[0] & 1, x[1] & 1
        e = {(1, 0): 0, (0, 1): 1, (1, 1): 2}[(a0, a1)]
        y = self.mul(self.omega_pow(-e), self.norm(x[0], x[1], x[2], x[3]))
        out = []
        for i in range(1, self.M):
            m, odd = divmod(i, 2)
            if odd:
                c0, c1 = y[2] >> m, y[3] >> m
            else:
                c0, c1 = (y[0] - 1) >> m, y[1] >> m
            d = (c0 & 1) + 2 * (c1 & 1)
            out.append(d)
            if d:
                y = self.mul(self.inv(self.digit_factor(i, d)), y)
        return e, out

    def lift(self, x: Key, prec: int) -> GElt:
        w = lambda v0, v1: WittApprox(v0, v1, prec)
        return GElt(EndoElt(w(x[0], x[1]), w(x[2], x[3]), self.fgl), x[4])


@dataclass
class QuotientGroup:
    M: int
    variant: str
    fgl: FGLTag
    norm_one: bool
    ring: KeyRing
    keys: list
    index: dict
    flags: np.ndarray
    dets: np.ndarray
    _mul_cache: dict = field(default_factory=dict, repr=False)
    _perm_cache: dict = field(default_factory=dict, repr=False)

    # -- basic structure -------------------------------------------------
    @property
    def projective(self) -> bool:
        return self.variant.startswith("P")

    @property
    def galois(self) -> bool:
        return self.variant.endswith("G2")

    @property
    def d(self) -> int:
        return det_bits(self.M)

    def __len__(self) -> int:
        return len(self.keys)

    @property
    def identity(self) -> int:
        return self.index[self.canon(self.ring.one())]

    def describe(self) -> dict:
        return {"variant": self.variant, "M": self.M, "fgl": self.fgl.value, "norm_one": self.norm_one}

    def canon(self, k: Key) -> Key:
        if self.projective:
            return min(k, self.ring.neg(k))
        return k

    def id_of_key(self, k: Key) -> int:
        return self.index[self.canon(k)]

    def mul(self, x: int, y: int) -> int:
        r = self._mul_cache.get((x, y))
        if r is None:
            r = self.id_of_key(self.ring.mul(self.keys[x], self.keys[y]))
            self._mul_cache[(x, y)] = r
        return r

    def inv(self, x: int) -> int:
        return self.id_of_key(self.ring.inv(self.keys[x]))

    def conj(self, h: int, x: int) -> int:
        return self.mul(self.mul(h, x), self.inv(h))

    def sigma(self, x: int) -> int:
        """Conjugation by the Galois element (1, 1)."""
        return self.id_of_key(self.ring.sigma(self.keys[x]))

    def flag(self, x: int) -> int:
        return int(self.flags[x])

    def det(self, x: int) -> int:
        return int(self.dets[x])

    def left_perm(self, g: int) -> np.ndarray:
        """perm[x] = id of g*x."""
        key = ("L", g)
        p = self._perm_cache.get(key)
        if p is None:
            kg = self.keys[g]
            p = np.array([self.id_of_key(self.ring.mul(kg, k)) for k in self.keys], dtype=np.int64)
            self._perm_cache[key] = p
        return p

    def right_perm(self, g: int) -> np.ndarray:
        """perm[x] = id of x*g."""
        key = ("R", g)
        p = self._perm_cache.get(key)
        if p is None:
            kg = self.keys[g]
            p = np.array([self.id_of_key(self.ring.mul(k, kg)) for k in self.keys], dtype=np.int64)
            self._perm_cache[key] = p
        return p

    # -- elements --------------------------------------------------------
    def id_of(self, g: GElt) -> int:
        if g.fgl is not self.fgl:
            raise ValueError("formal group law mismatch")
        if g.prec < self.ring.c:
            raise InsufficientPrecision(f"need precision at least {self.ring.c}, got {g.prec}")
        if g.e and not self.galois:
            raise VariantMismatch(f"{self.variant} has no Galois part")
        u = g.u
        k = self.ring.norm(u.a.a0, u.a.a1, u.b.a0, u.b.a1, g.e)
        return self.id_of_key(k)

    def element(self, x: int, prec: int) -> GElt:
        if prec < self.ring.c:
            raise InsufficientPrecision(f"need precision at least {self.ring.c}")
        return self.ring.lift(self.keys[x], prec)

    def normal_form(self, x: int) -> DigitForm:
        return _digit_form(self, self.keys[x])

    def reconstruct(self, df: DigitForm) -> int:
        return self.id_of_key(_key_of_form(self.ring, df))

    def id_of_form(self, df: DigitForm) -> int:
        return self.reconstruct(df)

    # -- subgroups -------------------------------------------------------
    def closure(self, gens: Iterable[int]) -> frozenset:
        gens = list(gens)
        seen = {self.identity}
        queue = deque([self.identity])
        while queue:
            x = queue.popleft()
            for g in gens:
                y = self.mul(x, g)
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        return frozenset(seen)

    def is_subgroup(self, ids: frozenset) -> bool:
        if self.identity not in ids:
            return False
        return all(self.mul(x, y) in ids for x in ids for y in ids)

    def is_normal(self, ids: frozenset, by: Iterable[int] | None = None) -> bool:
        conj_by = self.generators() if by is None else by
        return all(self.conj(h, x) in ids for h in conj_by for x in ids)

    def generators(self) -> list[int]:
        """A generating set: omega, the digit factors 1 + t*xi^i and (1, 1) when present.

        Norm-one groups do not contain all of these, so there a set is found greedily.
        """
        if not self.norm_one:
            ks = [self.ring.omega_pow(1)]
            ks += [self.ring.digit_factor(i, t) for i in range(1, self.M) for t in (1, 2)]
            if self.galois:
                ks.append(self.ring.one(1))
            return sorted({self.id_of_key(k) for k in ks})
        gens: list[int] = []
        current = frozenset([self.identity])
        for x in range(len(self)):
            if x not in current:
                gens.append(x)
                current = self.closure(gens)
                if len(current) == len(self):
                    break
        return gens


def _digit_form(Q: QuotientGroup, k: Key) -> DigitForm:
    e, digits = Q.ring.digits(k)
    if Q.projective and Q.M >= 3 and digits[1] in (1, 3):
        e, digits = Q.ring.digits(Q.ring.neg(k))
    flag = k[4] if Q.galois else None
    return DigitForm(e, tuple(digits), flag)


def _key_of_form(ring: KeyRing, df: DigitForm) -> Key:
    if len(df.digits) != ring.M - 1:
        raise ValueError(f"expected {ring.M - 1} digits")
    k = ring.omega_pow(df.omega_exp)
    for i, d in enumerate(df.digits, start=1):
        if d:
            k = ring.mul(k, ring.digit_factor(i, d))
    flag = df.galois_flag or 0
    return k[:4] + (flag,)


def _forms(M: int, variant: str) -> Iterable[DigitForm]:
    digit_choices: list[Sequence[int]] = [range(4)] * (M - 1)
    if variant.startswith("P") and M >= 3:
        digit_choices[1] = (0, 2)
    flags: Sequence[int | None] = (0, 1) if variant.endswith("G2") else (None,)
    for e in range(3):
        for ds in itertools.product(*digit_choices):
            for fl in flags:
                yield DigitForm(e, tuple(ds), fl)


def _validate_det(ring: KeyRing, keys: list, samples: int, seed: int) -> None:
    """Check det mod 2^d is constant on cosets using random representatives."""
    if samples <= 0 or not keys:
        return
    rng = np.random.default_rng(seed)
    K = ring.c + 3
    mk = (1 << K) - 1
    arr = np.array([k[:4] for k in keys], dtype=np.int64)
    n = len(keys)

    def wm(x0, x1, y0, y1):
        p = x1 * y1
        return (x0 * y0 - p) & mk, (x0 * y1 + x1 * y0 - p) & mk

    def det(a0, a1, b0, b1):
        na = (a0 * a0 - a0 * a1 + a1 * a1) & mk
        nb = (b0 * b0 - b0 * b1 + b1 * b1) & mk
        return (na - 2 * ring.u * nb) & mk

    dmask = (1 << ring.c) - 1
    base = None
    for _ in range(samples):
        # random lift of the representative, times a random element of F_{M/2}
        la = [(arr[:, i] + (rng.integers(0, 1 << 3, n) << ring.c)) & mk for i in (0, 1)]
        lb = [(arr[:, i] + (rng.integers(0, 1 << (K - ring.f), n) << ring.f)) & mk for i in (2, 3)]
        fa0 = (1 + (rng.integers(0, 1 << 3, n) << ring.c)) & mk
        fa1 = (rng.integers(0, 1 << 3, n) << ring.c) & mk
        fb0 = (rng.integers(0, 1 << (K - ring.f), n) << ring.f) & mk
        fb1 = (rng.integers(0, 1 << (K - ring.f), n) << ring.f) & mk
        d = (det(*la, *lb) * det(fa0, fa1, fb0, fb1)) & dmask
        if base is None:
            base = d
        elif not np.array_equal(base, d):
            raise AssertionError("det residue is not constant on a coset")


def q_build(
    M: int,
    variant: str,
    fgl: FGLTag | str,
    norm_one: bool = False,
    det_samples: int = 50,
    seed: int = 0,
) -> QuotientGroup:
    fgl = FGLTag.parse(fgl)
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    if M < 2:
        raise ValueError("depth must be at least 2")
    if M > depth_cap():
        raise DepthCapExceeded(f"depth {M} exceeds cap {depth_cap()}")
    return _build_cached(M, variant, fgl, norm_one, det_samples, seed)


@lru_cache(maxsize=32)
def _build_cached(M: int, variant: str, fgl: FGLTag, norm_one: bool, det_samples: int, seed: int) -> QuotientGroup:
    ring = KeyRing(M, fgl)
    projective = variant.startswith("P")
    keys = []
    for df in _forms(M, variant):
        k = _key_of_form(ring, df)
        if projective:
            k = min(k, ring.neg(k))
        keys.append(k)
    if len(set(keys)) != len(keys):
        raise AssertionError("digit forms do not give distinct classes")
    _validate_det(ring, keys, det_samples if len(keys) <= 50000 else 0, seed)
    d = det_bits(M)
    dm = (1 << d) - 1
    dets = np.array([ring.det(k) & dm for k in keys], dtype=np.int64)
    if norm_one:
        keep = [i for i in range(len(keys)) if dets[i] in (1, dm)]
        keys = [keys[i] for i in keep]
        dets = dets[keep]
    index = {k: i for i, k in enumerate(keys)}
    flags = np.array([k[4] for k in keys], dtype=np.int64)
    return QuotientGroup(M, variant, fgl, norm_one, ring, keys, index, flags, dets)


def q_normal_form(g: GElt, M: int, variant: str = "S2") -> DigitForm:
    if g.prec < (M + 1) // 2 + 2:
        raise InsufficientPrecision(f"depth {M} needs precision at least {(M + 1) // 2 + 2}")
    if g.e and not variant.endswith("G2"):
        raise VariantMismatch(f"{variant} has no Galois part")
    Q = q_build(M, variant, g.fgl, det_samples=0)
    return Q.normal_form(Q.id_of(g))


def q_norm_one(Q: QuotientGroup) -> frozenset:
    dm = (1 << Q.d) - 1
    return frozenset(i for i in range(len(Q)) if Q.dets[i] in (1, dm))


SUBGROUP_IMAGE_NAMES = ("K", "K1", "K1_low", "G24", "G48", "G12", "Q8", "C6", "norm_one")


def _gelt_ids(Q: QuotientGroup, names: Sequence[str], prec: int) -> list[int]:
    out = []
    for n in names:
        g = GElt(e_standard(n, Q.fgl, prec), 0)
        out.append(Q.id_of(g))
    return out


def filtration_image(Q: QuotientGroup, i: int) -> frozenset:
    """Image of F_{i/2}: omega exponent 0, digits a_1..a_{i-1} zero, flag 0."""
    out = []
    for x in range(len(Q)):
        if Q.flag(x):
            continue
        df = Q.normal_form(x)
        if df.omega_exp == 0 and all(d == 0 for d in df.digits[: i - 1]):
            out.append(x)
    return frozenset(out)


def norm_one_digit_generators(Q: QuotientGroup, prec: int) -> list[int]:
    """Norm-one elements from 1 + t*xi^i (i >= 3, t in {1, zeta}) rescaled by a central square root.

    A factor is kept when +-det is 1 mod 8, so that it has a 2-adic square root r;
    dividing by r gives determinant +-1.
    """
    out = []
    for i in range(3, Q.M):
        m, odd = divmod(i, 2)
        s = (2 * Q.fgl.u) ** m
        for t in (1, 2):
            t0, t1 = _TEICH[t]
            if odd:
                g = EndoElt(WittApprox(1, 0, prec), WittApprox(t0 * s, t1 * s, prec), Q.fgl)
            else:
                g = EndoElt(WittApprox(1 + t0 * s, t1 * s, prec), WittApprox(0, 0, prec), Q.fgl)
            d = e_det(g)
            for sign in (1, -1):
                dd = (sign * d) % (1 << prec)
                if dd % 8 == 1:
                    r = w_sqrt_hensel(dd, 1 if dd % 16 == 1 else 5, prec).a0
                    out.append(Q.id_of(GElt(g * inv_mod2k(r, prec), 0)))
                    break
    return out


def q_subgroup_image(Q: QuotientGroup, name: str, prec: int | None = None) -> frozenset:
    prec = prec or max(8, (Q.M + 1) // 2 + 4)
    if name == "norm_one":
        return q_norm_one(Q)
    if name.startswith("F(") and name.endswith(")"):
        return filtration_image(Q, int(name[2:-1]))
    if name == "K":
        return Q.closure(_gelt_ids(Q, ["alpha"], prec) + sorted(filtration_image(Q, 3)))
    if name == "K1":
        return q_subgroup_image(Q, "K", prec) & q_norm_one(Q)
    if name == "K1_low":
        gens = _gelt_ids(Q, ["alpha", "alpha_i", "alpha_j", "alpha_k"], prec)
        return Q.closure(gens + norm_one_digit_generators(Q, prec))
    if name in ("G24", "G48", "G12", "Q8", "C6", "C8", "G24p", "G48p"):
        table = sg_standard(name, Q.fgl, prec)
        if any(x.e for x in table.elements) and not Q.galois:
            raise VariantMismatch(f"{name} needs a Galois variant")
        return frozenset(Q.id_of(x) for x in table.elements)
    raise KeyError(f"unknown subgroup image {name!r}")


def q_cosets(Q: QuotientGroup, H: frozenset) -> tuple[list[int], np.ndarray]:
    """Left cosets xH: representatives (first id in each coset) and id -> coset index."""
    coset_of = np.full(len(Q), -1, dtype=np.int64)
    reps: list[int] = []
    hs = sorted(H)
    for x in range(len(Q)):
        if coset_of[x] >= 0:
            continue
        c = len(reps)
        reps.append(x)
        for h in hs:
            coset_of[Q.mul(x, h)] = c
    return reps, coset_of


def q_info(Q: QuotientGroup) -> dict:
    info = dict(Q.describe())
    info["size"] = len(Q)
    info["det_bits"] = Q.d
    info["norm_one_size"] = len(q_norm_one(Q))
    subs = {}
    for name in ("K", "K1", "K1_low"):
        if Q.M >= 3:
            subs[name] = len(q_subgroup_image(Q, name))
    for name in ("Q8", "C6", "G24") + (("G12", "G48") if Q.galois else ()):
        if Q.M >= 3:
            subs[name] = len(q_subgroup_image(Q, name))
    info["subgroups"] = subs
    return info
