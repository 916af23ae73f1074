import json

import pytest

from morava.groupring import r_augment
from morava.resolution import (
    CHECK_IDS,
    DepthTooSmall,
    _Items,
    context,
    export_ring,
    import_ring,
    res_check,
    res_delta,
    res_delta2_approx,
    res_suite,
    res_theta_approx,
)
from morava.witt import WittApprox


@pytest.fixture(scope="module")
def phi():
    return context("honda", 4, 3, "phi")


@pytest.fixture(scope="module")
def plain():
    return context("honda", 4, 3, "plain")


def test_delta1(phi, plain):
    e = plain.one()
    d1 = res_delta("delta1", plain)
    assert d1 == e - plain.el("alpha")
    assert r_augment(d1).is_zero()
    z, z2 = phi.w(0, 1), phi.w(-1, -1)
    e, a = phi.one(), phi.el("alpha")
    assert res_delta("delta1_phi", phi) == -(z * (e - a) + z2 * (e - phi.sigma(a)))


def test_delta3_two_ways(plain):
    e = plain.one()
    s = e + plain.el("i") + plain.el("j") + plain.el("k")
    tail = e - plain.el("alpha^-1")
    d3 = res_delta("delta3", plain)
    assert d3 == plain.pi_conj(s) * plain.pi_conj(tail)
    assert r_augment(d3).is_zero()


def test_variant_mismatch(plain):
    with pytest.raises(ValueError):
        res_delta("delta1_phi", plain)
    with pytest.raises(KeyError):
        res_delta("delta4", plain)


def test_depth_too_small():
    ctx = context("honda", 3, 3, "plain")
    with pytest.raises(DepthTooSmall):
        res_theta_approx("plain", ctx)
    with pytest.raises(DepthTooSmall):
        res_delta2_approx("plain", ctx)
    (r,) = res_check("C6", "honda", 3, 3, variant="plain")
    assert r.status == "inconclusive"


def test_theta_augmentation(plain):
    # augmentation of e + alpha + i + j + k - alpha_i - alpha_j - alpha_k is 2;
    # every product inside tr_C3 has a factor of augmentation zero
    theta = res_theta_approx("plain", plain)
    assert r_augment(theta) == WittApprox(2, 0, 3)
    assert r_augment(res_delta2_approx("plain", plain)) == WittApprox(2, 0, 3)


def test_theta_congruences(plain):
    theta = res_theta_approx("plain", plain)
    e = plain.one()
    s = e + plain.el("i") + plain.el("j") + plain.el("k")
    assert plain.ideal("I4K").contains(theta - (s + 2))
    assert plain.ideal("I2K").contains(theta - (e - plain.el("i")) * (e - plain.el("j")))


def test_delta2_phi_is_sigma_invariant(phi):
    d2 = res_delta2_approx("phi", phi)
    assert phi.sigma(d2) == d2


def test_failure_carries_witness(phi):
    it = _Items()
    it.member("e in J", phi.ideal("J"), phi.one())
    assert it.items == [("e in J", False)]
    res = import_ring(it.witness["residue"])
    assert not res.is_zero()
    assert phi.ideal("J").contains(phi.one() - res)


def test_export_round_trip(phi):
    x = res_theta_approx("phi", phi)
    d = export_ring(x)
    assert import_ring(json.loads(json.dumps(d))) == x


@pytest.mark.parametrize("cid", ["C4", "C5", "C8", "C9", "C10"])
def test_monotone_in_depth_and_precision(cid):
    for M, N in ((4, 3), (4, 2), (3, 3)):
        assert all(r.status == "pass" for r in res_check(cid, "honda", M, N))


def test_fast_suite_both_laws():
    verdicts = {}
    for fgl in ("honda", "elliptic"):
        reports = res_suite("fast", fgl)
        assert len(reports) == 7
        verdicts[fgl] = [(r.check_id, r.variant, r.status) for r in reports]
    assert verdicts["honda"] == verdicts["elliptic"]
    assert {s for _, _, s in verdicts["honda"]} == {"pass"}


def test_reports_deterministic():
    a = [r.to_json() for r in res_check("C3", "honda", 4, 3, seed=5)]
    context.cache_clear()
    b = [r.to_json() for r in res_check("C3", "honda", 4, 3, seed=5)]
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)


def test_unknown_check():
    with pytest.raises(KeyError):
        res_check("C11")
    assert len(CHECK_IDS) == 10
