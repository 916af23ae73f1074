import random

import pytest
from hypothesis import given, settings, strategies as st

from morava.groupring import (
    CosetModuleElt,
    NoGaloisStructure,
    RingElt,
    RingMismatch,
    m_act,
    m_augment,
    m_dualize,
    r_augment,
    r_group,
    r_mul,
    r_scalar,
    r_sum,
    r_tr_c3,
    r_tr_sigma,
    third,
)
from morava.quotients import q_subgroup_image
from morava.resolution import context
from morava.witt import WittApprox, w_mul

N = 3


@pytest.fixture(scope="module")
def ctx():
    return context("honda", 4, N, "phi")


@pytest.fixture(scope="module")
def plain():
    return context("honda", 4, N, "plain")


def naive_mul(x, y):
    """(a g)(b h) = a b^{phi(g)} gh with Frobenius (c0, c1) -> (c0 - c1, -c1)."""
    Q, m = x.Q, (1 << x.prec) - 1
    out = {}
    for g, (a0, a1) in x.c.items():
        for h, (b0, b1) in y.c.items():
            if Q.flag(g):
                b0, b1 = b0 - b1, -b1
            p = a1 * b1
            c = (a0 * b0 - p, a0 * b1 + a1 * b0 - p)
            k = Q.mul(g, h)
            o = out.get(k, (0, 0))
            out[k] = ((o[0] + c[0]) & m, (o[1] + c[1]) & m)
    return RingElt(Q, x.prec, out)


def rand_elt(Q, rng, support=4, prec=N):
    m = (1 << prec) - 1
    return RingElt(Q, prec, {rng.randrange(len(Q)): (rng.randint(0, m), rng.randint(0, m)) for _ in range(support)})


@st.composite
def elts(draw, Q):
    ids = draw(st.lists(st.integers(0, len(Q) - 1), min_size=0, max_size=5))
    return RingElt(Q, N, {g: (draw(st.integers(0, 7)), draw(st.integers(0, 7))) for g in ids})


def test_twist_example(ctx):
    Q = ctx.Q
    s = ctx.gid("sigma")
    z = ctx.w(0, 1)
    lhs = r_group(Q, s, N, z) * r_group(Q, Q.identity, N, z)
    assert lhs == r_group(Q, s, N, 1)


def test_mul_matches_naive_and_ring_axioms(ctx):
    rng = random.Random(7)
    Q = ctx.Q
    for _ in range(1000):
        x, y, z = (rand_elt(Q, rng) for _ in range(3))
        xy = r_mul(x, y)
        assert xy == naive_mul(x, y)
        assert r_mul(xy, z) == r_mul(x, r_mul(y, z))
        assert x * (y + z) == x * y + x * z
        assert (x + y) * z == x * z + y * z


@settings(max_examples=50, deadline=None)
@given(data=st.data())
def test_augmentation_is_multiplicative_plain(data):
    p = context("honda", 4, N, "plain")
    x, y = data.draw(elts(p.Q)), data.draw(elts(p.Q))
    assert r_augment(x * y) == w_mul(r_augment(x), r_augment(y))


def test_quaternion_sums(ctx, plain):
    for c in (ctx, plain):
        e = c.one()
        s = e + c.el("i") + c.el("j") + c.el("k")
        assert s * (s + 2) == s * 6
        assert (s - (e - c.el("i")) * (e - c.el("j"))).all_even()


def test_commutator_identity(plain):
    e, a = plain.one(), plain.el("alpha")
    for t in "ijk":
        tau, at = plain.el(t), plain.el("alpha_" + t)
        assert (tau - at) * (e - a) == (e - at * a) * (tau - e) + (e - at)


def test_tr_sigma(ctx):
    e = ctx.one()
    assert ctx.tr_sigma(e) == e
    rng = random.Random(3)
    for _ in range(50):
        x = rand_elt(ctx.Q, rng)
        t = ctx.tr_sigma(x)
        assert ctx.tr_sigma(t) == t
        assert ctx.sigma(t) == t
        # the defining formula, recomputed by hand
        z, z2 = ctx.w(0, 1), ctx.w(-1, -1)
        assert t == -(z * x + z2 * ctx.sigma(x))


def test_tr_sigma_needs_galois(plain):
    with pytest.raises(NoGaloisStructure):
        r_tr_sigma(plain.one())


def test_tr_c3(ctx):
    om = ctx.gid("omega")
    e = ctx.one()
    assert r_tr_c3(e, om) == e * 3
    assert r_tr_c3(ctx.el("i"), om) == ctx.el("i") + ctx.el("j") + ctx.el("k")
    rng = random.Random(5)
    o = ctx.el("omega")
    oi = ctx.el("omega^-1")
    for _ in range(20):
        t = r_tr_c3(rand_elt(ctx.Q, rng), om)
        assert o * t * oi == t


def test_third():
    for n in (3, 8, 20):
        assert (3 * third(n)) % (1 << n) == 1


def test_augment_examples(ctx):
    e = ctx.one()
    a = ctx.el("alpha")
    zero = WittApprox(0, 0, N)
    assert r_augment(e - a) == zero
    assert r_augment(ctx.tr_sigma(e - a)) == zero
    s = ctx.el("i") + ctx.el("j") + ctx.el("k")
    assert r_augment(s + 3) == WittApprox(6, 0, N)


def test_module_action(ctx):
    mod = ctx.module(0)
    e0 = ctx.gen(0)
    for g in q_subgroup_image(ctx.Q, "G12"):
        assert m_act(r_group(ctx.Q, g, N), e0) == e0
    v = m_act(ctx.tr_sigma(ctx.one() - ctx.el("alpha")), e0)
    assert m_augment(v).is_zero()
    rng = random.Random(11)
    for _ in range(100):
        g, h = rng.randrange(len(ctx.Q)), rng.randrange(len(ctx.Q))
        w = CosetModuleElt(mod, N, {rng.randrange(len(mod)): (rng.randint(0, 7), rng.randint(0, 7))})
        G, H = r_group(ctx.Q, g, N), r_group(ctx.Q, h, N)
        assert m_act(G, m_act(H, w)) == m_act(G * H, w)


def test_augmentation_kills_products(ctx):
    rng = random.Random(2)
    e1 = ctx.gen(1)
    for _ in range(30):
        x = rand_elt(ctx.Q, rng)
        x = x - r_scalar(ctx.Q, r_augment(x), N)
        assert r_augment(x).is_zero()
        assert m_augment(m_act(x, e1)).is_zero()


def test_dualize_identity(ctx):
    mod = ctx.module(0)
    f = m_dualize(mod, mod.base(), N)
    assert f(ctx.one()) == r_sum(ctx.Q, mod.H, N)


def test_mismatch():
    a = context("honda", 4, N, "phi").one()
    b = context("honda", 4, N, "plain").one()
    with pytest.raises(RingMismatch):
        a + b
