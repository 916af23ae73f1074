import pytest
from hypothesis import given, strategies as st

from morava.witt import (
    BadBranch,
    NoSquareRoot,
    NotAUnit,
    PrecisionMismatch,
    WittApprox,
    inv_mod2k,
    w_constant,
    w_format,
    w_frobenius,
    w_inv,
    w_mul,
    w_norm,
    w_sqrt_hensel,
    w_val2,
)


def poly_mul(x, y, n):
    """Schoolbook product of a0 + a1 t and b0 + b1 t, then t^2 -> -1 - t."""
    c0 = x[0] * y[0]
    c1 = x[0] * y[1] + x[1] * y[0]
    c2 = x[1] * y[1]
    m = 1 << n
    return ((c0 - c2) % m, (c1 - c2) % m)


coords = st.integers(0, (1 << 12) - 1)
precs = st.integers(3, 12)


@st.composite
def witt(draw, prec=None):
    n = prec if prec is not None else draw(precs)
    return WittApprox(draw(coords), draw(coords), n)


@st.composite
def witt_pair(draw):
    n = draw(precs)
    return draw(witt(n)), draw(witt(n))


def test_zeta_squared():
    z = w_constant("zeta", 8)
    assert w_mul(z, z) == WittApprox(-1, -1, 8)


def test_pi_squared_is_minus_three():
    pi = WittApprox(1, 2, 10)
    assert w_mul(pi, pi) == WittApprox(-3, 0, 10)


def test_product_mod_8():
    assert w_mul(WittApprox(5, 6, 3), WittApprox(7, 2, 3)) == WittApprox(7, 0, 3)


@given(witt_pair())
def test_mul_matches_polynomial_expansion(p):
    x, y = p
    z = w_mul(x, y)
    assert (z.a0, z.a1) == poly_mul((x.a0, x.a1), (y.a0, y.a1), x.prec)


@given(witt_pair())
def test_mul_commutes(p):
    x, y = p
    assert w_mul(x, y) == w_mul(y, x)


def test_inverse_examples():
    z = w_constant("zeta", 6)
    assert w_inv(z) == WittApprox(-1, -1, 6)
    assert w_inv(WittApprox(3, 0, 4)) == WittApprox(11, 0, 4)
    with pytest.raises(NotAUnit):
        w_inv(WittApprox(2, 2, 6))


@pytest.mark.parametrize("k", [1, 3, 8, 16])
def test_inv_mod2k_brute_force(k):
    m = 1 << k
    for n in range(1, min(m, 300), 2):
        r = inv_mod2k(n, k)
        assert (n * r) % m == 1


@given(witt())
def test_inverse_round_trip(x):
    if w_norm(x) % 2 == 0:
        with pytest.raises(NotAUnit):
            w_inv(x)
    else:
        assert w_mul(x, w_inv(x)) == WittApprox(1, 0, x.prec)


@given(witt())
def test_frobenius_is_involution(x):
    assert w_frobenius(w_frobenius(x)) == x


@given(witt_pair())
def test_frobenius_is_multiplicative(p):
    x, y = p
    assert w_frobenius(w_mul(x, y)) == w_mul(w_frobenius(x), w_frobenius(y))


def test_frobenius_of_zeta_and_alpha():
    assert w_frobenius(w_constant("zeta", 5)) == WittApprox(-1, -1, 5)
    a = w_constant("alpha", 8)
    assert w_frobenius(a) == w_inv(a) * -1


def test_sqrt_examples():
    assert w_sqrt_hensel(-7, 5, 3) == WittApprox(5, 0, 3)
    assert w_sqrt_hensel(-7, 5, 5) == WittApprox(21, 0, 5)
    with pytest.raises(NoSquareRoot):
        w_sqrt_hensel(3, 1, 8)
    with pytest.raises(BadBranch):
        w_sqrt_hensel(-7, 1, 8)


@pytest.mark.parametrize("n", [3, 5, 7, 9])
def test_sqrt_against_search(n):
    # s^2 = -7 mod 2^(n+1) with s = 5 mod 8 pins s down modulo 2^n
    m = 1 << (n + 1)
    found = {s % (1 << n) for s in range(m) if (s * s + 7) % m == 0 and s % 8 == 5}
    assert found == {w_sqrt_hensel(-7, 5, n).a0}


def test_constants():
    assert w_constant("pi", 4) == WittApprox(1, 2, 4)
    assert w_constant("alpha", 3) == WittApprox(5, 6, 3)
    assert w_constant("sqrt_m7", 3) == WittApprox(5, 0, 3)
    a = w_constant("alpha", 16)
    assert w_mul(a, w_frobenius(a)) == WittApprox(-1, 0, 16)


def test_val2():
    assert w_val2(w_constant("zeta", 5)) == 0
    assert w_val2(WittApprox(2, 2, 5)) == 1
    assert w_val2(WittApprox(0, 0, 6)) == 6


def test_precision_mismatch():
    with pytest.raises(PrecisionMismatch):
        WittApprox(1, 0, 4) + WittApprox(1, 0, 5)


def test_format():
    assert w_format(WittApprox(21, 0, 5)) == "0x15 mod 2^5"
    assert w_format(WittApprox(1, 2, 4)) == "0x1 + 0x2*zeta mod 2^4"
