"""Submodules of (Z/2^N)^D in Howell form, and finite models of group-ring ideals.

Ring elements and coset-module elements are flattened to vectors of length
2*(number of basis ids), holding (a0, a1) for each id.  Ideals are spans
closed under multiplication by group generators and by zeta.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .groupring import CosetModule, CosetModuleElt, RingElt, RingMismatch
from .quotients import QuotientGroup, filtration_image, q_subgroup_image
from .witt import inv_mod2k

Op = Callable[[np.ndarray], np.ndarray]


class MissingSubgroup(KeyError):
    pass


def _val2(x: int, n: int) -> int:
    if x == 0:
        return n
    return (x & -x).bit_length() - 1


class HowellBasis:
    """Echelon rows with power-of-two leading entries and the Howell closure property.

    Each stored row r with leading entry 2^k at column p also has 2^(N-k) r in
    the span of the rows after it, so reduction in pivot order decides membership.
    """

    def __init__(self, dim: int, N: int):
        self.dim = dim
        self.N = N
        self.mask = (1 << N) - 1
        self.rows: dict[int, np.ndarray] = {}
        self.kval: dict[int, int] = {}
        self.serial: dict[int, int] = {}
        self._count = 0

    def __len__(self) -> int:
        return len(self.rows)

    def copy(self) -> "HowellBasis":
        out = HowellBasis(self.dim, self.N)
        out.rows = dict(self.rows)
        out.kval = dict(self.kval)
        out.serial = dict(self.serial)
        out._count = self._count
        return out

    def log2_size(self) -> int:
        return sum(self.N - k for k in self.kval.values())

    def _reduce_one(self, v: np.ndarray) -> tuple[np.ndarray, int]:
        """Reduce v; return the residue and the first column where reduction stopped (-1 if zero)."""
        v = v & self.mask
        start = 0
        while True:
            nz = np.flatnonzero(v[start:])
            if nz.size == 0:
                return v, -1
            p = start + int(nz[0])
            k = self.kval.get(p)
            c = int(v[p])
            if k is None or c & ((1 << k) - 1):
                return v, p
            v = (v - (c >> k) * self.rows[p]) & self.mask
            start = p + 1

    def reduce(self, v: np.ndarray) -> np.ndarray:
        """Full reduction; a vector is a member iff this is zero."""
        v = v & self.mask
        for p in sorted(self.rows):
            c = int(v[p])
            if c == 0:
                continue
            k = self.kval[p]
            if c & ((1 << k) - 1) == 0:
                v = (v - (c >> k) * self.rows[p]) & self.mask
        return v

    def reduce_batch(self, V: np.ndarray) -> np.ndarray:
        V = V & self.mask
        if V.size == 0:
            return V
        for p in sorted(self.rows):
            k = self.kval[p]
            c = V[:, p]
            ok = (c != 0) & ((c & ((1 << k) - 1)) == 0)
            idx = np.flatnonzero(ok)
            if idx.size:
                V[idx] = (V[idx] - (c[idx] >> k)[:, None] * self.rows[p]) & self.mask
        return V

    def contains(self, v: np.ndarray) -> bool:
        return not self._reduce_one(np.asarray(v, dtype=np.int64))[0].any()

    def _store(self, p: int, row: np.ndarray, k: int) -> None:
        self.rows[p] = row
        self.kval[p] = k
        self.serial[p] = self._count
        self._count += 1

    def insert(self, v: np.ndarray) -> bool:
        """Add v to the span; returns whether the span grew."""
        grew = False
        stack = [np.asarray(v, dtype=np.int64)]
        while stack:
            r, p = self._reduce_one(stack.pop())
            if p < 0:
                continue
            grew = True
            c = int(r[p])
            j = _val2(c, self.N)
            unit = c >> j
            if unit != 1:
                r = (r * inv_mod2k(unit, self.N)) & self.mask
            old = self.rows.get(p)
            self._store(p, r, j)
            if old is not None:
                stack.append(old)
            if j > 0:
                stack.append((r << (self.N - j)) & self.mask)
        return grew

    def insert_many(self, V: np.ndarray) -> bool:
        if V.size == 0:
            return False
        R = self.reduce_batch(np.array(V, dtype=np.int64))
        grew = False
        for i in np.flatnonzero(R.any(axis=1)):
            grew |= self.insert(R[i])
        return grew

    def matrix(self) -> np.ndarray:
        if not self.rows:
            return np.zeros((0, self.dim), dtype=np.int64)
        return np.array([self.rows[p] for p in sorted(self.rows)], dtype=np.int64)

    def canonical(self) -> np.ndarray:
        """Howell normal form: entries above each pivot reduced below its leading entry."""
        piv = sorted(self.rows)
        rows = [self.rows[p].copy() for p in piv]
        for i in range(len(piv)):
            r = rows[i]
            for j in range(i + 1, len(piv)):
                q = int(r[piv[j]]) >> self.kval[piv[j]]
                if q:
                    r = (r - q * rows[j]) & self.mask
            rows[i] = r
        if not rows:
            return np.zeros((0, self.dim), dtype=np.int64)
        return np.array(rows, dtype=np.int64)


@dataclass(frozen=True)
class Ambient:
    kind: str  # "ring" or "module"
    Q: QuotientGroup
    N: int
    module: CosetModule | None = None

    @property
    def dim(self) -> int:
        return self.module.dim if self.module is not None else 2 * len(self.Q)

    def describe(self) -> dict:
        d = dict(self.Q.describe())
        d.update({"kind": self.kind, "N": self.N, "dim": self.dim})
        if self.module is not None:
            d["subgroup"] = self.module.name
        return d

    def same(self, other: "Ambient") -> bool:
        return self.kind == other.kind and self.Q is other.Q and self.N == other.N and self.module is other.module


def ring_ambient(Q: QuotientGroup, N: int) -> Ambient:
    return Ambient("ring", Q, N)


def module_ambient(mod: CosetModule, N: int) -> Ambient:
    return Ambient("module", mod.Q, N, mod)


# -- linear operators on row batches --------------------------------------


def _sig(W: np.ndarray) -> np.ndarray:
    out = np.empty_like(W)
    out[..., 0] = W[..., 0] - W[..., 1]
    out[..., 1] = -W[..., 1]
    return out


def _zeta_times(W: np.ndarray) -> np.ndarray:
    out = np.empty_like(W)
    out[..., 0] = -W[..., 1]
    out[..., 1] = W[..., 0] - W[..., 1]
    return out


def _zeta2_times(W: np.ndarray) -> np.ndarray:
    out = np.empty_like(W)
    out[..., 0] = W[..., 1] - W[..., 0]
    out[..., 1] = -W[..., 0]
    return out


def _permute(V: np.ndarray, perm: np.ndarray, n: int, twist: bool) -> np.ndarray:
    W = V.reshape(V.shape[0], n, 2)
    if twist:
        W = _sig(W)
    out = np.zeros_like(W)
    out[:, perm, :] = W
    return out.reshape(V.shape[0], -1)


def left_group_op(amb: Ambient, g: int) -> Op:
    Q = amb.Q
    twist = bool(Q.flags[g])
    if amb.module is not None:
        perm = amb.module.coset_perm(g)
        n = len(amb.module)
    else:
        perm = Q.left_perm(g)
        n = len(Q)
    return lambda V: _permute(V, perm, n, twist)


def right_group_op(amb: Ambient, g: int) -> Op:
    if amb.module is not None:
        raise RingMismatch("coset modules have no right action")
    perm = amb.Q.right_perm(g)
    n = len(amb.Q)
    return lambda V: _permute(V, perm, n, False)


def left_zeta_op(amb: Ambient) -> Op:
    def op(V: np.ndarray) -> np.ndarray:
        return _zeta_times(V.reshape(V.shape[0], -1, 2)).reshape(V.shape[0], -1)

    return op


def right_zeta_op(amb: Ambient) -> Op:
    if amb.module is not None:
        raise RingMismatch("coset modules have no right action")
    flags = amb.Q.flags.astype(bool)

    def op(V: np.ndarray) -> np.ndarray:
        W = V.reshape(V.shape[0], -1, 2)
        out = _zeta_times(W)
        out[:, flags, :] = _zeta2_times(W[:, flags, :])
        return out.reshape(V.shape[0], -1)

    return op


def closure_ops(amb: Ambient, sides: str, gens: Sequence[int] | None = None) -> list[Op]:
    gens = amb.Q.generators() if gens is None else list(gens)
    if sides not in ("left", "right", "two-sided"):
        raise ValueError(f"unknown side {sides!r}")
    ops: list[Op] = []
    if sides in ("left", "two-sided"):
        ops += [left_group_op(amb, g) for g in gens] + [left_zeta_op(amb)]
    if sides in ("right", "two-sided"):
        ops += [right_group_op(amb, g) for g in gens] + [right_zeta_op(amb)]
    return ops


# -- submodules -----------------------------------------------------------


class Submodule:
    def __init__(self, ambient: Ambient, basis: HowellBasis | None = None, name: str = ""):
        self.ambient = ambient
        self.basis = basis or HowellBasis(ambient.dim, ambient.N)
        self.name = name

    def __len__(self) -> int:
        return len(self.basis)

    def log2_size(self) -> int:
        return self.basis.log2_size()

    def _vec(self, x: "RingElt | CosetModuleElt | np.ndarray") -> np.ndarray:
        if isinstance(x, RingElt):
            if self.ambient.kind != "ring" or x.Q is not self.ambient.Q or x.prec != self.ambient.N:
                raise RingMismatch("element does not live in this ambient ring")
            return x.to_vector()
        if isinstance(x, CosetModuleElt):
            if x.mod is not self.ambient.module or x.prec != self.ambient.N:
                raise RingMismatch("element does not live in this module")
            return x.to_vector()
        v = np.asarray(x, dtype=np.int64)
        if v.shape != (self.ambient.dim,):
            raise RingMismatch(f"expected a vector of length {self.ambient.dim}")
        return v

    def contains(self, x: "RingElt | CosetModuleElt | np.ndarray") -> bool:
        return self.basis.contains(self._vec(x))

    def residue(self, x: "RingElt | CosetModuleElt | np.ndarray") -> np.ndarray:
        return self.basis.reduce(self._vec(x))

    def canonical(self) -> np.ndarray:
        return self.basis.canonical()

    def rows(self) -> np.ndarray:
        return self.basis.matrix()

    def __le__(self, other: "Submodule") -> bool:
        if not self.ambient.same(other.ambient):
            raise RingMismatch("different ambients")
        M = self.rows()
        if len(M) == 0:
            return True
        return not other.basis.reduce_batch(M).any()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Submodule):
            return NotImplemented
        return self.ambient.same(other.ambient) and np.array_equal(self.canonical(), other.canonical())

    def __repr__(self) -> str:
        return f"Submodule({self.name or '?'}, rows={len(self)}, log2|.|={self.log2_size()})"


def _close(sub: Submodule, ops: Sequence[Op]) -> Submodule:
    b = sub.basis
    mark = 0
    while True:
        fresh = [p for p, s in b.serial.items() if s >= mark]
        if not fresh:
            break
        mark = b._count
        F = np.array([b.rows[p] for p in fresh], dtype=np.int64)
        for op in ops:
            b.insert_many(op(F) & b.mask)
    return sub


def i_from_vectors(ambient: Ambient, vectors: Iterable[np.ndarray], name: str = "") -> Submodule:
    s = Submodule(ambient, name=name)
    vs = [np.asarray(v, dtype=np.int64) for v in vectors]
    if vs:
        s.basis.insert_many(np.array(vs))
    return s


def i_span(
    generators: Sequence["RingElt | CosetModuleElt"],
    sides: str = "two-sided",
    Q: QuotientGroup | None = None,
    N: int | None = None,
    module: CosetModule | None = None,
    name: str = "",
) -> Submodule:
    """Smallest submodule containing the generators and closed under the chosen multiplications."""
    if generators:
        g0 = generators[0]
        if isinstance(g0, CosetModuleElt):
            module = g0.mod
            Q = g0.mod.Q
        else:
            Q = g0.Q
        N = g0.prec
    if Q is None or N is None:
        raise ValueError("an empty span needs Q and N")
    amb = module_ambient(module, N) if module is not None else ring_ambient(Q, N)
    if amb.module is not None and sides != "left":
        raise RingMismatch("coset modules only support left spans")
    for g in generators:
        if isinstance(g, RingElt) != (amb.module is None) or g.prec != N:
            raise RingMismatch("generators must share an ambient")
    s = i_from_vectors(amb, [g.to_vector() for g in generators], name)
    return _close(s, closure_ops(amb, sides))


def i_contains(s: Submodule, x: "RingElt | CosetModuleElt | np.ndarray") -> bool:
    return s.contains(x)


def i_sum(*subs: Submodule, name: str = "") -> Submodule:
    amb = subs[0].ambient
    out = Submodule(amb, name=name)
    for s in subs:
        if not s.ambient.same(amb):
            raise RingMismatch("different ambients")
        out.basis.insert_many(s.rows())
    return out


def i_scale(s: Submodule, c: int, name: str = "") -> Submodule:
    return i_from_vectors(s.ambient, list((s.rows() * c) & s.basis.mask), name or f"{c}*{s.name}")


def i_multiple_of_one(amb: Ambient, c: int, name: str = "") -> Submodule:
    """The ideal (c) = c * R."""
    return i_from_vectors(amb, list(np.eye(amb.dim, dtype=np.int64) * c), name or f"({c})")


def i_times_aug(X: Submodule, gens: Sequence[int], sides: str = "two-sided", name: str = "") -> Submodule:
    """X * I(A) for a normal subgroup A generated by gens.

    I(A) is the left ideal generated by the e - a with a in gens, so
    X * I(A) is spanned by x(e - a) with x running over a spanning set of X.
    """
    amb = X.ambient
    rows = X.rows()
    out = Submodule(amb, name=name)
    if len(rows):
        for a in gens:
            out.basis.insert_many((rows - right_group_op(amb, a)(rows)) & out.basis.mask)
    return _close(out, closure_ops(amb, sides))


def subgroup_generators(Q: QuotientGroup, ids: Iterable[int]) -> list[int]:
    """A small generating set, found greedily in id order."""
    ids = sorted(ids)
    gens: list[int] = []
    current = frozenset([Q.identity])
    target = len(ids)
    for x in ids:
        if x not in current:
            gens.append(x)
            current = Q.closure(gens)
            if len(current) == target:
                break
    if len(current) != target:
        raise MissingSubgroup("the id set is not a subgroup")
    return gens


def sylow_image(Q: QuotientGroup) -> frozenset:
    """Image of S_2 (elements congruent to 1 mod xi) inside Q."""
    return filtration_image(Q, 1)


def i_aug(Q: QuotientGroup, N: int, ids: Iterable[int], sides: str = "two-sided", name: str = "") -> Submodule:
    amb = ring_ambient(Q, N)
    one = RingElt(Q, N, {Q.identity: (1, 0)})
    base = i_from_vectors(amb, [one.to_vector()])
    return i_times_aug(base, subgroup_generators(Q, ids), sides, name or "Iaug")


def _image_ids(Q: QuotientGroup, name: str) -> frozenset:
    if name in ("S", "S21", "PS21"):
        return sylow_image(Q)
    if name in ("K1", "PK1"):
        return q_subgroup_image(Q, "K1")
    if name in ("K", "PK"):
        return q_subgroup_image(Q, "K")
    if name == "full":
        return frozenset(range(len(Q)))
    try:
        return q_subgroup_image(Q, name)
    except KeyError as exc:
        raise MissingSubgroup(name) from exc


class IdealFactory:
    """Builds and caches the standard ideals of one quotient ring."""

    def __init__(self, Q: QuotientGroup, N: int, sides: str = "two-sided"):
        self.Q = Q
        self.N = N
        self.sides = sides
        self.amb = ring_ambient(Q, N)
        self._cache: dict[str, Submodule] = {}
        self.k_gens = subgroup_generators(Q, _image_ids(Q, "K1"))
        self.s_gens = subgroup_generators(Q, _image_ids(Q, "S"))

    def _get(self, key: str, build: Callable[[], Submodule]) -> Submodule:
        s = self._cache.get(key)
        if s is None:
            s = build()
            s.name = key
            self._cache[key] = s
        return s

    def const(self, c: int) -> Submodule:
        return self._get(f"({c})", lambda: i_multiple_of_one(self.amb, c))

    def aug(self, which: str) -> Submodule:
        gens = self.k_gens if which == "K" else self.s_gens if which == "S" else None
        if gens is None:
            return self._get(f"I({which})", lambda: i_aug(self.Q, self.N, _image_ids(self.Q, which), self.sides))
        one = i_from_vectors(self.amb, [RingElt(self.Q, self.N, {self.Q.identity: (1, 0)}).to_vector()])
        return self._get(f"I({which})", lambda: i_times_aug(one, gens, self.sides))

    def times(self, X: Submodule, which: str) -> Submodule:
        gens = self.k_gens if which == "K" else self.s_gens
        return i_times_aug(X, gens, self.sides)

    def power(self, which: str, n: int) -> Submodule:
        if n == 1:
            return self.aug(which)
        return self._get(f"I({which})^{n}", lambda: self.times(self.power(which, n - 1), which))

    def k_s2(self) -> Submodule:
        """IPK^1 * (IPS_2^1)^2."""
        return self._get("IK*IS^2", lambda: self.times(self.times(self.aug("K"), "S"), "S"))

    def s2_k(self) -> Submodule:
        return self._get("IS^2*IK", lambda: self.times(self.power("S", 2), "K"))

    def k_s(self) -> Submodule:
        return self._get("IK*IS", lambda: self.times(self.aug("K"), "S"))

    def s_k(self) -> Submodule:
        return self._get("IS*IK", lambda: self.times(self.aug("S"), "K"))

    def scaled(self, X: Submodule, c: int) -> Submodule:
        return self._get(f"{c}*{X.name}", lambda: i_scale(X, c))

    def standard(self, name: str) -> Submodule:
        if name == "J":
            return self._get("J", lambda: i_sum(self.const(2), self.k_s(), self.s_k()))
        if name == "I":
            return self._get(
                "I",
                lambda: i_sum(
                    self.const(4),
                    self.scaled(self.power("S", 2), 2),
                    self.scaled(self.aug("K"), 2),
                    self.power("K", 2),
                    self.k_s2(),
                    self.s2_k(),
                ),
            )
        if name == "Itheta":
            return self._get(
                "Itheta",
                lambda: i_sum(
                    self.power("K", 7),
                    self.scaled(self.power("K", 3), 2),
                    self.scaled(self.aug("K"), 4),
                    self.const(8),
                ),
            )
        if name == "Itheta_phi":
            # (4 IPK^1, 2 (IPS_2^1)^2 IPK^1, (IPK^1)^2)
            return self._get(
                "Itheta_phi",
                lambda: i_sum(self.scaled(self.aug("K"), 4), self.scaled(self.s2_k(), 2), self.power("K", 2)),
            )
        if name == "I4K":
            return self._get("I4K", lambda: i_sum(self.const(4), self.aug("K")))
        if name == "I2K":
            return self._get("I2K", lambda: i_sum(self.const(2), self.aug("K")))
        if name == "IK2":
            return self.power("K", 2)
        if name.startswith("Iaug(") and name.endswith(")"):
            inner = name[5:-1]
            if inner in ("K1", "PK1", "K"):
                return self.aug("K")
            if inner in ("S", "S21", "PS21"):
                return self.aug("S")
            return self.aug(inner)
        raise KeyError(f"unknown ideal {name!r}")


IDEAL_NAMES = ("J", "I", "Itheta", "Itheta_phi", "I4K", "I2K", "IK2", "Iaug(K1)", "Iaug(S21)")


def i_standard(name: str, Q: QuotientGroup, N: int, sides: str = "two-sided") -> Submodule:
    return IdealFactory(Q, N, sides).standard(name)


def i_module_image(s: Submodule, mod: CosetModule, base: int | None = None, name: str = "") -> Submodule:
    """Span of x*[base] for x in s, closed under the group action."""
    if s.ambient.kind != "ring" or s.ambient.Q is not mod.Q:
        raise RingMismatch("ideal and module do not match")
    N = s.ambient.N
    Q = mod.Q
    base = mod.base() if base is None else base
    rep = mod.reps[base]
    target = np.array([mod.coset_of[Q.mul(g, rep)] for g in range(len(Q))], dtype=np.int64)
    rows = s.rows()
    m = len(rows)
    out = np.zeros((m, len(mod), 2), dtype=np.int64)
    if m:
        W = rows.reshape(m, -1, 2)
        for comp in (0, 1):
            np.add.at(out[:, :, comp], (slice(None), target), W[:, :, comp])
    amb = module_ambient(mod, N)
    sub = i_from_vectors(amb, list(out.reshape(m, -1) & ((1 << N) - 1)), name or f"{s.name}*e")
    return _close(sub, closure_ops(amb, "left"))
