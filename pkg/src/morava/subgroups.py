"""Finite subgroups of G_2 and their images modulo {+-1}."""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass
from typing import Iterable

from .endo import FGLTag
from .gtwo import (
    GElt,
    g_conj,
    g_element,
    g_identity,
    g_inv,
    g_mul,
    g_neg,
    g_standard,
)


class CapExceeded(RuntimeError):
    pass


class NotASubgroup(ValueError):
    pass


def elt_key(x: GElt) -> tuple[int, int, int, int, int]:
    return (x.u.a.a0, x.u.a.a1, x.u.b.a0, x.u.b.a1, x.e)


def proj_key(x: GElt) -> tuple[int, int, int, int, int]:
    return min(elt_key(x), elt_key(g_neg(x)))


@dataclass(frozen=True)
class SubgroupTable:
    name: str
    elements: tuple[GElt, ...]
    projective: bool = False

    def key(self, x: GElt) -> tuple:
        return proj_key(x) if self.projective else elt_key(x)

    def keys(self) -> set[tuple]:
        return {self.key(x) for x in self.elements}

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, x: GElt) -> bool:
        return self.key(x) in self.keys()

    @property
    def fgl(self) -> FGLTag:
        return self.elements[0].fgl

    @property
    def prec(self) -> int:
        return self.elements[0].prec


def sg_closure(
    generators: list[GElt], cap: int = 96, projective: bool = False, name: str = "closure"
) -> SubgroupTable:
    """Breadth-first closure; elements are listed in order of first appearance."""
    if cap < 1:
        raise ValueError("cap must be at least 1")
    if not generators:
        raise ValueError("need at least one generator")
    key = proj_key if projective else elt_key
    ident = g_identity(generators[0].fgl, generators[0].prec)
    seen = {key(ident)}
    order = [ident]
    queue = deque([ident])
    while queue:
        x = queue.popleft()
        for g in generators:
            y = g_mul(x, g)
            k = key(y)
            if k in seen:
                continue
            seen.add(k)
            order.append(y)
            queue.append(y)
            if len(order) > cap:
                raise CapExceeded(f"closure exceeds {cap} elements")
    return SubgroupTable(name, tuple(order), projective)


# Quaternion units come first in the generator lists so that breadth-first
# order meets e, i, j, k before anything else; coset representatives are then
# the familiar ones.
_GENERATORS = {
    "Q8": ["i", "j"],
    "C6": ["-omega"],
    "C8": ["bracket_1pi"],
    "G24": ["i", "j", "k", "omega"],
    "G12": ["-omega", "bracket_jmk"],
    "G48": ["i", "j", "k", "omega", "bracket_1pi"],
}

SUBGROUP_NAMES = ("Q8", "C6", "C8", "G24", "G12", "G48", "G24p", "G48p")


def _named(name: str, fgl: FGLTag, prec: int) -> GElt:
    if name.startswith("-"):
        return g_neg(g_element(name[1:], fgl, prec))
    return g_element(name, fgl, prec)


def sg_generators(name: str, fgl: FGLTag | str, prec: int) -> list[GElt]:
    fgl = FGLTag.parse(fgl)
    base = name[:-1] if name.endswith("p") else name
    if base not in _GENERATORS:
        raise KeyError(f"unknown subgroup {name!r}")
    gens = [_named(n, fgl, prec) for n in _GENERATORS[base]]
    if name.endswith("p"):
        pi0 = g_standard("pi0", fgl, prec)
        gens = [g_conj(pi0, g) for g in gens]
    return gens


def sg_standard(name: str, fgl: FGLTag | str, prec: int = 8, projective: bool = False) -> SubgroupTable:
    """Named finite subgroup; primed groups are conjugates by (pi, 0).

    G48p is read as pi * G48 * pi^-1, by analogy with G24p.
    """
    fgl = FGLTag.parse(fgl)
    if prec < 4:
        raise ValueError("subgroup tables need precision at least 4")
    if name.endswith("p"):
        base = sg_standard(name[:-1], fgl, prec, projective)
        pi0 = g_standard("pi0", fgl, prec)
        elts = tuple(g_conj(pi0, x) for x in base.elements)
        return SubgroupTable(name, elts, projective)
    return sg_closure(sg_generators(name, fgl, prec), cap=96, projective=projective, name=name)


def sg_projectivize(t: SubgroupTable) -> SubgroupTable:
    if t.projective:
        return t
    seen: set = set()
    out = []
    for x in t.elements:
        k = proj_key(x)
        if k not in seen:
            seen.add(k)
            out.append(x)
    return SubgroupTable("P" + t.name, tuple(out), True)


def sg_element_order(t: SubgroupTable, x: GElt, cap: int = 96) -> int:
    target = t.key(g_identity(x.fgl, x.prec))
    y = x
    for n in range(1, cap + 1):
        if t.key(y) == target:
            return n
        y = g_mul(y, x)
    raise CapExceeded(f"element order exceeds {cap}")


def sg_order_profile(t: SubgroupTable) -> dict[int, int]:
    return dict(sorted(Counter(sg_element_order(t, x) for x in t.elements).items()))


def sg_is_subset(h: SubgroupTable, g: SubgroupTable) -> bool:
    if h.projective != g.projective:
        raise ValueError("compare tables of the same kind")
    return h.keys() <= g.keys()


def sg_transversal(g: SubgroupTable, h: SubgroupTable) -> list[GElt]:
    """Left coset representatives of h in g, first occurrences in g's order."""
    if not sg_is_subset(h, g):
        raise NotASubgroup(f"{h.name} is not contained in {g.name}")
    covered: set = set()
    reps = []
    for x in g.elements:
        if g.key(x) in covered:
            continue
        reps.append(x)
        covered.update(g.key(g_mul(x, y)) for y in h.elements)
    assert len(reps) * len(h) == len(g)
    return reps


def sg_flag_zero(t: SubgroupTable) -> SubgroupTable:
    return SubgroupTable(t.name + "_S", tuple(x for x in t.elements if x.e == 0), t.projective)


def sg_is_closed(t: SubgroupTable) -> bool:
    keys = t.keys()
    for x in t.elements:
        if t.key(g_inv(x)) not in keys:
            return False
        for y in t.elements:
            if t.key(g_mul(x, y)) not in keys:
                return False
    return True


def sg_reduce_keys(elts: Iterable[GElt], prec: int, projective: bool = False) -> set[tuple]:
    """Keys after reducing every element to a lower precision."""
    out = set()
    for x in elts:
        y = GElt(x.u.reduce(prec), x.e)
        out.add(proj_key(y) if projective else elt_key(y))
    return out
