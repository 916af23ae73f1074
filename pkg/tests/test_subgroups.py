import pytest

from morava.endo import FGLTag
from morava.gtwo import g_is_norm_one
from morava.subgroups import (
    CapExceeded,
    NotASubgroup,
    SUBGROUP_NAMES,
    sg_closure,
    sg_flag_zero,
    sg_generators,
    sg_is_closed,
    sg_is_subset,
    sg_order_profile,
    sg_reduce_keys,
    sg_standard,
    sg_transversal,
)
from morava.gtwo import g_element

TAGS = [FGLTag.HONDA, FGLTag.ELLIPTIC]
ORDERS = {"Q8": 8, "C6": 6, "C8": 8, "G24": 24, "G12": 12, "G48": 48, "G24p": 24, "G48p": 48}


def perm_profile(n, gens):
    """Order profile of the permutation group generated by gens, by enumeration."""
    ident = tuple(range(n))
    comp = lambda p, q: tuple(p[q[i]] for i in range(n))
    seen, todo = {ident}, [ident]
    while todo:
        x = todo.pop()
        for g in gens:
            y = comp(x, g)
            if y not in seen:
                seen.add(y)
                todo.append(y)
    prof = {}
    for p in seen:
        k, y = 1, p
        while y != ident:
            y, k = comp(y, p), k + 1
        prof[k] = prof.get(k, 0) + 1
    return dict(sorted(prof.items()))


@pytest.mark.parametrize("fgl", TAGS)
@pytest.mark.parametrize("name", SUBGROUP_NAMES)
def test_orders_and_closure(fgl, name):
    t = sg_standard(name, fgl, 8)
    assert len(t) == ORDERS[name]
    assert sg_is_closed(t)
    assert all(g_is_norm_one(x) for x in t.elements)


@pytest.mark.parametrize("fgl", TAGS)
def test_closure_examples(fgl):
    i, om = g_element("i", fgl, 8), g_element("omega", fgl, 8)
    assert len(sg_closure([i, om])) == 24
    assert len(sg_closure(sg_generators("G48", fgl, 8))) == 48
    with pytest.raises(CapExceeded):
        sg_closure([i, om], cap=10)


@pytest.mark.parametrize("fgl", TAGS)
def test_profiles(fgl):
    s4 = perm_profile(4, [(1, 0, 2, 3), (1, 2, 3, 0)])
    s3 = perm_profile(3, [(1, 0, 2), (1, 2, 0)])
    assert s4 == {1: 1, 2: 9, 3: 8, 4: 6}
    assert sg_order_profile(sg_standard("G48", fgl, 8, projective=True)) == s4
    assert sg_order_profile(sg_standard("G12", fgl, 8, projective=True)) == s3
    assert sg_order_profile(sg_standard("Q8", fgl, 8)) == {1: 1, 2: 1, 4: 6}


@pytest.mark.parametrize("fgl", TAGS)
def test_transversals(fgl):
    g48, g12 = sg_standard("G48", fgl, 8), sg_standard("G12", fgl, 8)
    assert sg_is_subset(g12, g48)
    reps = sg_transversal(g48, g12)
    assert reps == [g_element(x, fgl, 8) for x in ("e", "i", "j", "k")]
    assert len(sg_transversal(sg_standard("G24", fgl, 8), sg_standard("Q8", fgl, 8))) == 3
    with pytest.raises(NotASubgroup):
        sg_transversal(g12, g48)


@pytest.mark.parametrize("fgl", TAGS)
def test_g12_flag_zero_part_is_c6(fgl):
    t = sg_flag_zero(sg_standard("G12", fgl, 8))
    assert len(t) == 6
    assert t.keys() == sg_standard("C6", fgl, 8).keys()


@pytest.mark.parametrize("fgl", TAGS)
@pytest.mark.parametrize("name", ["G48", "G12", "G24p"])
def test_precision_stability(fgl, name):
    lo = sg_standard(name, fgl, 8)
    hi = sg_standard(name, fgl, 12)
    assert len(lo) == len(hi)
    assert sg_reduce_keys(hi.elements, 8) == lo.keys()
