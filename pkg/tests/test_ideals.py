import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from morava.groupring import RingElt
from morava.ideals import (
    HowellBasis,
    i_aug,
    i_contains,
    i_from_vectors,
    i_module_image,
    i_span,
    i_standard,
    ring_ambient,
)
from morava.quotients import q_cosets, q_subgroup_image
from morava.resolution import augmentation_kernel_oracle, context


def enumerate_span(gens, n, dim):
    """Every Z/2^n combination of the generators."""
    m = 1 << n
    out = set()
    for cs in itertools.product(range(m), repeat=len(gens)):
        v = np.zeros(dim, dtype=np.int64)
        for c, g in zip(cs, gens):
            v = (v + c * np.asarray(g)) % m
        out.add(tuple(int(x) for x in v))
    return out


def howell_of(gens, n, dim):
    hb = HowellBasis(dim, n)
    if gens:
        hb.insert_many(np.array(gens, dtype=np.int64))
    return hb


matrices = st.integers(1, 3).flatmap(
    lambda k: st.lists(st.lists(st.integers(0, 3), min_size=4, max_size=4), min_size=k, max_size=k)
)


@settings(max_examples=80, deadline=None)
@given(matrices)
def test_membership_matches_enumeration_z4(gens):
    span = enumerate_span(gens, 2, 4)
    hb = howell_of(gens, 2, 4)
    for v in itertools.product(range(4), repeat=4):
        assert hb.contains(np.array(v)) == (v in span)
    assert hb.log2_size() == int(np.log2(len(span)))


@pytest.mark.parametrize("seed", range(10))
def test_membership_matches_enumeration_z8(seed):
    rng = np.random.default_rng(seed)
    gens = rng.integers(0, 8, size=(2, 3)).tolist()
    span = enumerate_span(gens, 3, 3)
    hb = howell_of(gens, 3, 3)
    for v in itertools.product(range(8), repeat=3):
        assert hb.contains(np.array(v)) == (v in span)


@settings(max_examples=60, deadline=None)
@given(matrices, matrices)
def test_canonical_form_decides_equality(a, b):
    ha, hb = howell_of(a, 2, 4), howell_of(b, 2, 4)
    same = enumerate_span(a, 2, 4) == enumerate_span(b, 2, 4)
    assert np.array_equal(ha.canonical(), hb.canonical()) == same


def test_annihilator_closure_example():
    # over Z/4, 2 * (2, 1) = (0, 2) has to appear as its own pivot row
    hb = howell_of([[2, 1]], 2, 2)
    assert hb.contains(np.array([0, 2]))
    assert not hb.contains(np.array([0, 1]))


@pytest.fixture(scope="module")
def small():
    return context("honda", 3, 2, "plain")


@pytest.fixture(scope="module")
def c4():
    return context("honda", 4, 3, "phi")


def test_basic_spans(small):
    Q, N = small.Q, 2
    zero = i_span([], "left", Q, N)
    assert len(zero) == 0 and zero.contains(np.zeros(2 * len(Q), dtype=np.int64))
    two = i_span([small.one() * 2], "two-sided")
    even = i_from_vectors(ring_ambient(Q, N), list(2 * np.eye(2 * len(Q), dtype=np.int64)))
    assert two == even
    assert two.contains(small.el("alpha") * 2)
    again = i_span([RingElt.from_vector(Q, N, r) for r in two.rows()], "two-sided")
    assert again == two


def test_left_augmentation_of_subgroup_is_coinvariant_kernel(small):
    Q, N = small.Q, 2
    H = q_subgroup_image(Q, "C6")
    gens = [small.one() - RingElt(Q, N, {h: (1, 0)}) for h in sorted(H)]
    span = i_span(gens, "left")
    reps, coset_of = q_cosets(Q, H)
    # the left span of the e - h is spanned by the g - gh, which is the kernel of
    # W[Q] -> W[Q/H]; that kernel has basis [g] - [rep of gH] for g not a rep
    rows = []
    for g in range(len(Q)):
        r = reps[coset_of[g]]
        if g == r:
            continue
        for c in (0, 1):
            v = np.zeros(2 * len(Q), dtype=np.int64)
            v[2 * g + c] = 1
            v[2 * r + c] = (1 << N) - 1
            rows.append(v)
    oracle = i_from_vectors(ring_ambient(Q, N), rows)
    assert span == oracle


def test_module_image_of_full_augmentation(small):
    Q, N = small.Q, 2
    mod = small.module(0)
    full = i_aug(Q, N, range(len(Q)))
    img = i_module_image(full, mod)
    assert np.array_equal(img.canonical(), augmentation_kernel_oracle(mod, N))
    two = i_module_image(i_span([small.one() * 2], "two-sided"), mod)
    assert two.log2_size() == (N - 1) * mod.dim


def test_standard_ideal_examples(c4):
    K1 = i_standard("Iaug(K1)", c4.Q, c4.N)
    e = c4.one()
    assert K1.contains(e - c4.el("alpha"))
    assert K1.contains(e - c4.el("alpha_i"))
    J = c4.ideal("J")
    assert not i_contains(J, e)
    assert c4.ideal("Itheta") <= c4.ideal("I") <= J


def test_two_sided_closure(c4):
    I = c4.ideal("I")
    rows = I.rows()
    rng = np.random.default_rng(0)
    for g in rng.choice(len(c4.Q), size=8, replace=False):
        G = RingElt(c4.Q, c4.N, {int(g): (1, 0)})
        for r in rows[rng.choice(len(rows), size=5, replace=False)]:
            x = RingElt.from_vector(c4.Q, c4.N, r)
            assert I.contains(G * x) and I.contains(x * G)


def test_generator_choice_independence(c4):
    """Iaug(K1) from two generating sets gives one ideal."""
    Q, N = c4.Q, c4.N
    K1 = q_subgroup_image(Q, "K1")
    a = i_aug(Q, N, K1)
    e = c4.one()
    b = i_span([e - RingElt(Q, N, {k: (1, 0)}) for k in sorted(K1)], "two-sided")
    assert a == b
