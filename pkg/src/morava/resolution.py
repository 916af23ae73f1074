"""Differentials of the duality resolution at finite depth and the named checks C1..C10.

Two settings are modelled on norm-one projective quotients at depth M with
coefficients W mod 2^N:

    plain: ring W[PS_2^1], modules W up from PG24, PC6, PC6, PG24'
    phi:   ring W_phi[PG_2^1], modules W up from PG48, PG12, PG12, PG48'
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np

from .endo import FGLTag, e_det, e_inv, e_one, e_standard
from .groupring import (
    CosetModule,
    CosetModuleElt,
    RingElt,
    m_act,
    m_augment,
    m_generator,
    r_conj_group,
    r_conj_key,
    r_dual_partial1,
    r_group,
    r_scalar,
    r_sigma,
    r_tr_c3,
    r_tr_sigma,
    third,
)
from .gtwo import GElt, g_conj, g_element, g_inv, g_mul, g_neg, g_standard
from .ideals import (
    IdealFactory,
    Submodule,
    closure_ops,
    i_module_image,
    i_span,
    i_sum,
)
from .quotients import DigitForm, QuotientGroup, q_build, q_subgroup_image
from .subgroups import sg_order_profile, sg_standard, sg_transversal
from .witt import WittApprox, w_constant, w_frobenius, w_mul

CHECK_IDS = ("C1", "C2", "C3", "C4", "C5", "C6", "C7", "C8", "C9", "C10")
VARIANTS = ("plain", "phi")
_MODULE_GROUPS = {"plain": ("G24", "C6", "G24p"), "phi": ("G48", "G12", "G48p")}


class DepthTooSmall(ValueError):
    pass


@dataclass
class CheckReport:
    check_id: str
    status: str
    fgl: str
    M: int
    N: int
    variant: str
    items: list = field(default_factory=list)
    witness: dict | None = None
    diagnostics: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_json(self) -> dict:
        out = {
            "check_id": self.check_id,
            "status": self.status,
            "context": {"fgl": self.fgl, "M": self.M, "N": self.N, "variant": self.variant},
            "items": [{"name": n, "ok": ok} for n, ok in self.items],
        }
        if self.diagnostics:
            out["diagnostics"] = self.diagnostics
        if self.witness is not None:
            out["witness"] = self.witness
        return out

    def line(self) -> str:
        return f"{self.check_id:<4} {self.variant:<5} {self.fgl:<8} M={self.M} N={self.N}  {self.status.upper()}"


# -- export helpers ---------------------------------------------------------


def export_ring(x: RingElt) -> dict:
    Q = x.Q
    coeffs = [[str(Q.normal_form(g)), hex(a0), hex(a1)] for g, (a0, a1) in sorted(x.c.items())]
    return {"quotient": {**Q.describe(), "prec": x.prec}, "coeffs": coeffs}


def export_module(v: CosetModuleElt) -> dict:
    Q = v.mod.Q
    coeffs = [[str(Q.normal_form(v.mod.reps[c])), hex(a0), hex(a1)] for c, (a0, a1) in sorted(v.c.items())]
    return {"quotient": {**Q.describe(), "prec": v.prec}, "subgroup": v.mod.name, "coeffs": coeffs}


def import_ring(d: dict) -> RingElt:
    """Inverse of export_ring."""
    q = d["quotient"]
    Q = q_build(q["M"], q["variant"], q["fgl"], norm_one=q["norm_one"])
    coeffs = {}
    for form, a0, a1 in d["coeffs"]:
        coeffs[Q.reconstruct(DigitForm.parse(form))] = (int(a0, 16), int(a1, 16))
    return RingElt(Q, q["prec"], coeffs)


def import_module(d: dict, mod: CosetModule) -> CosetModuleElt:
    """Inverse of export_module for a module built over the same quotient."""
    Q = mod.Q
    coeffs = {}
    for form, a0, a1 in d["coeffs"]:
        coeffs[int(mod.coset_of[Q.reconstruct(DigitForm.parse(form))])] = (int(a0, 16), int(a1, 16))
    return CosetModuleElt(mod, d["quotient"]["prec"], coeffs)


# -- context ----------------------------------------------------------------


class Context:
    """Quotient ring, coset modules and ideals for one (fgl, M, N, variant)."""

    def __init__(self, fgl: FGLTag | str, M: int, N: int, variant: str, seed: int = 0, sigma_rep: str = "jmk"):
        if variant not in VARIANTS:
            raise ValueError(f"unknown variant {variant!r}")
        self.fgl = FGLTag.parse(fgl)
        self.M = M
        self.N = N
        self.variant = variant
        self.seed = seed
        self.P = max(8, (M + 1) // 2 + 4)
        self.Q: QuotientGroup = q_build(M, "PG2" if variant == "phi" else "PS2", self.fgl, norm_one=True, seed=seed)
        self._modules: dict[int, CosetModule] = {}
        self._ideals: dict[str, IdealFactory] = {}
        self._images: dict = {}
        # x^sigma is conjugation by [j-k], which acts on W by Frobenius and
        # permutes i, j, k up to sign; for the elliptic law it equals (1, 1).
        if sigma_rep not in ("jmk", "canonical"):
            raise ValueError(f"unknown sigma representative {sigma_rep!r}")
        self.sigma_rep = sigma_rep
        self.sigma_by = self.gid("bracket_jmk") if (self.Q.galois and sigma_rep == "jmk") else None

    # elements
    def gelt(self, name: str) -> GElt:
        inv = name.endswith("^-1")
        base = name[:-3] if inv else name
        g = g_neg(g_element(base[1:], self.fgl, self.P)) if base.startswith("-") else g_element(base, self.fgl, self.P)
        return g_inv(g) if inv else g

    def gid(self, name: str) -> int:
        return self.Q.id_of(self.gelt(name))

    def el(self, name: str) -> RingElt:
        return r_group(self.Q, self.gid(name), self.N)

    def one(self) -> RingElt:
        return r_scalar(self.Q, 1, self.N)

    def w(self, a0: int, a1: int = 0) -> WittApprox:
        return WittApprox(a0, a1, self.N)

    def pi_key(self) -> tuple:
        pi = e_standard("pi", self.fgl, self.P)
        return self.Q.ring.norm(pi.a.a0, pi.a.a1, pi.b.a0, pi.b.a1, 0)

    def pi_conj(self, x: RingElt) -> RingElt:
        return r_conj_key(x, self.pi_key())

    def sigma(self, x: RingElt) -> RingElt:
        return r_sigma(x, self.sigma_by) if self.Q.galois else _plain_sigma(x)

    def tr_sigma(self, x: RingElt) -> RingElt:
        return r_tr_sigma(x, self.sigma_by)

    # modules
    def module(self, p: int) -> CosetModule:
        idx = {0: 0, 1: 1, 2: 1, 3: 2}[p]
        mod = self._modules.get(idx)
        if mod is None:
            name = _MODULE_GROUPS[self.variant][idx]
            H = q_subgroup_image(self.Q, name, self.P)
            mod = CosetModule(self.Q, H, "P" + name)
            self._modules[idx] = mod
        return mod

    def gen(self, p: int) -> CosetModuleElt:
        return m_generator(self.module(p), self.N)

    # ideals
    def ideals(self, sides: str = "two-sided") -> IdealFactory:
        f = self._ideals.get(sides)
        if f is None:
            f = IdealFactory(self.Q, self.N, sides)
            self._ideals[sides] = f
        return f

    def ideal(self, name: str, sides: str = "two-sided") -> Submodule:
        return self.ideals(sides).standard(name)

    def ideal_image(self, name: str, p: int, sides: str = "two-sided") -> Submodule:
        key = (name, p, sides)
        s = self._images.get(key)
        if s is None:
            s = i_module_image(self.ideal(name, sides), self.module(p))
            self._images[key] = s
        return s


def _plain_sigma(x: RingElt) -> RingElt:
    """Frobenius on the group parts of a flag-free ring, i.e. conjugation by (1, 1)."""
    Q = x.Q
    out = {}
    for g, w in x.c.items():
        k = Q.ring.sigma(Q.keys[g])
        out[Q.id_of_key(k)] = w
    return RingElt(Q, x.prec, out)


@lru_cache(maxsize=16)
def context(fgl: str, M: int, N: int, variant: str, seed: int = 0, sigma_rep: str = "jmk") -> Context:
    return Context(fgl, M, N, variant, seed, sigma_rep)


# -- the differentials and approximations ------------------------------------


def res_delta(name: str, ctx: Context) -> RingElt:
    """delta1 = e - alpha, delta3 = pi (e+i+j+k)(e - alpha^-1) pi^-1, and their tr_sigma versions."""
    e = ctx.one()
    if name in ("delta1", "delta1_phi"):
        d = e - ctx.el("alpha")
    elif name in ("delta3", "delta3_phi"):
        s = e + ctx.el("i") + ctx.el("j") + ctx.el("k")
        d = ctx.pi_conj(s * (e - ctx.el("alpha^-1")))
    else:
        raise KeyError(f"unknown differential {name!r}")
    if name.endswith("_phi"):
        if ctx.variant != "phi":
            raise ValueError("phi differentials live in the Galois-twisted ring")
        return ctx.tr_sigma(d)
    return d


def _tr_c3(ctx: Context, x: RingElt) -> RingElt:
    return r_tr_c3(x, ctx.gid("omega"))


def _common_part(ctx: Context) -> tuple[RingElt, RingElt, RingElt]:
    e = ctx.one()
    ai, aj, ak = ctx.el("alpha_i"), ctx.el("alpha_j"), ctx.el("alpha_k")
    head = e + ctx.el("alpha") + ctx.el("i") + ctx.el("j") + ctx.el("k") - ai - aj - ak
    t1 = (e - ai) * (ctx.el("j") - aj)
    t2 = (e - ai * aj) * (ctx.el("k") - ak)
    return head, t1, t2


def _need_depth(ctx: Context) -> None:
    if ctx.M < 4:
        raise DepthTooSmall("the theta and delta2 formulas need depth at least 4")


def res_theta_approx(variant: str, ctx: Context) -> RingElt:
    _need_depth(ctx)
    head, t1, t2 = _common_part(ctx)
    e = ctx.one()
    t3 = (e - ctx.el("alpha_i") * ctx.el("alpha_j") * ctx.el("alpha_k")) * (e + ctx.el("alpha"))
    x = head - _tr_c3(ctx, t1 + t2 + t3) * third(ctx.N)
    return ctx.tr_sigma(x) if variant == "phi" else x


def res_delta2_approx(variant: str, ctx: Context) -> RingElt:
    _need_depth(ctx)
    head, t1, t2 = _common_part(ctx)
    x = head - _tr_c3(ctx, t1 + t2) * third(ctx.N)
    return ctx.tr_sigma(x) if variant == "phi" else x


def delta1_of(ctx: Context) -> RingElt:
    return res_delta("delta1_phi" if ctx.variant == "phi" else "delta1", ctx)


def delta3_of(ctx: Context) -> RingElt:
    return res_delta("delta3_phi" if ctx.variant == "phi" else "delta3", ctx)


# -- checks -------------------------------------------------------------------


class _Items:
    def __init__(self) -> None:
        self.items: list[tuple[str, bool]] = []
        self.witness: dict | None = None

    def add(self, name: str, ok: bool, witness: Callable[[], dict] | None = None) -> None:
        ok = bool(ok)
        self.items.append((name, ok))
        if not ok and self.witness is None and witness is not None:
            self.witness = {"item": name, **witness()}

    def member(self, name: str, sub: Submodule, x: "RingElt | CosetModuleElt") -> None:
        ok = sub.contains(x)

        def wit() -> dict:
            r = sub.residue(x)
            if isinstance(x, RingElt):
                return {"residue": export_ring(RingElt.from_vector(x.Q, x.prec, r))}
            return {"residue": export_module(CosetModuleElt.from_vector(x.mod, x.prec, r))}

        self.add(name, ok, wit)

    def equal(self, name: str, x, y) -> None:
        def wit() -> dict:
            d = x - y
            return {"difference": export_ring(d) if isinstance(d, RingElt) else export_module(d)}

        self.add(name, x == y, wit)


def _report(cid: str, ctx_info: tuple, it: _Items, diagnostics: dict | None = None) -> CheckReport:
    fgl, M, N, variant = ctx_info
    status = "pass" if all(ok for _, ok in it.items) else "fail"
    return CheckReport(cid, status, fgl, M, N, variant, it.items, it.witness, diagnostics or {})


def _c1(fgl: FGLTag, N: int) -> _Items:
    it = _Items()
    w = lambda a0, a1=0: WittApprox(a0, a1, N)
    alpha = w_constant("alpha", N)
    pi = w_constant("pi", N)
    s7 = w_constant("sqrt_m7", N)
    it.add("alpha*alpha^sigma = -1", w_mul(alpha, w_frobenius(alpha)) == w(-1))
    it.add("pi^2 = -3", w_mul(pi, pi) == w(-3))
    it.add("pi*pi^sigma = 3", w_mul(pi, w_frobenius(pi)) == w(3))
    it.add("sqrt(-7)^2 = -7", w_mul(s7, s7) == w(-7))
    it.add("sqrt(-7) = 5 mod 8", s7.a0 % 8 == 5 and s7.a1 == 0)
    it.add("alpha*sqrt(-7) = 1 - 2 zeta", w_mul(alpha, s7) == w(1, -2))
    it.add("det(pi) = 3", e_det(e_standard("pi", fgl, N)) == 3 % (1 << N))
    return it


def _profile_of_perms(n: int, gens: list[tuple]) -> dict[int, int]:
    def comp(p, q):
        return tuple(p[q[i]] for i in range(n))

    ident = tuple(range(n))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = comp(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt

    def order(p):
        k, y = 1, p
        while y != ident:
            y, k = comp(y, p), k + 1
        return k

    return dict(sorted(Counter(order(p) for p in seen).items()))


def _c2(fgl: FGLTag, prec: int = 8) -> _Items:
    it = _Items()
    E = lambda n: e_standard(n, fgl, prec)
    one = e_one(fgl, prec)
    i, j, k, om = E("i"), E("j"), E("k"), E("omega")
    it.add("i^2 = j^2 = k^2 = -1", i * i == -one and j * j == -one and k * k == -one)
    it.add("ij = k, jk = i, ki = j", i * j == k and j * k == i and k * i == j)
    it.add("ji = -k", j * i == -k)
    two_om = (one + i + j + k) * -1
    it.add("2 omega = -(1+i+j+k)", om * 2 == two_om)
    oi = e_inv(om)
    it.add("omega i omega^-1 = j", om * i * oi == j)
    it.add("omega j omega^-1 = k", om * j * oi == k)
    it.add("omega k omega^-1 = i", om * k * oi == i)
    b = g_standard("bracket_1pi", fgl, prec)
    gi = GElt(i, 0)
    target = gi if fgl is FGLTag.HONDA else g_neg(gi)
    it.add("[1+i]^2 = +-i", g_mul(b, b) == target)
    bjk = g_standard("bracket_jmk", fgl, prec)
    it.add("[j-k] = j[1+i]", bjk == g_mul(GElt(j, 0), b))
    ga = GElt(E("alpha"), 0)
    it.add("[j-k] alpha [j-k]^-1 = alpha^sigma", g_conj(bjk, ga) == GElt(E("alpha").sigma(), 0))
    orders = {}
    for name in ("Q8", "C6", "C8", "G24", "G12", "G48"):
        orders[name] = len(sg_standard(name, fgl, prec))
    it.add("subgroup orders 8,6,8,24,12,48", orders == {"Q8": 8, "C6": 6, "C8": 8, "G24": 24, "G12": 12, "G48": 48})
    s4 = _profile_of_perms(4, [(1, 0, 2, 3), (1, 2, 3, 0)])
    s3 = _profile_of_perms(3, [(1, 0, 2), (1, 2, 0)])
    it.add("P(G48) profile = S4", sg_order_profile(sg_standard("G48", fgl, prec, projective=True)) == s4)
    it.add("P(G12) profile = S3", sg_order_profile(sg_standard("G12", fgl, prec, projective=True)) == s3)
    it.add("Q8 profile", sg_order_profile(sg_standard("Q8", fgl, prec)) == {1: 1, 2: 1, 4: 6})
    g48 = sg_standard("G48", fgl, prec)
    g12 = sg_standard("G12", fgl, prec)
    reps = sg_transversal(g48, g12)
    want = [g_element(n, fgl, prec) for n in ("e", "i", "j", "k")]
    it.add("G48/G12 transversal {e,i,j,k}", reps == want)
    return it


def _random_elements(ctx: Context, count: int, support: int = 6) -> list[RingElt]:
    rng = np.random.default_rng(ctx.seed)
    n = len(ctx.Q)
    out = []
    mask = (1 << ctx.N) - 1
    for _ in range(count):
        ids = rng.choice(n, size=min(support, n), replace=False)
        coeffs = {int(g): (int(rng.integers(0, mask + 1)), int(rng.integers(0, mask + 1))) for g in ids}
        out.append(RingElt(ctx.Q, ctx.N, coeffs))
    return out


def _table_ids(ctx: Context, name: str) -> list[int]:
    return [ctx.Q.id_of(x) for x in sg_standard(name, ctx.fgl, ctx.P).elements]


def _c3(ctx: Context, samples: int = 100) -> _Items:
    it = _Items()
    e = ctx.one()
    alpha = ctx.el("alpha")
    zeta, zeta_s = ctx.w(0, 1), ctx.w(-1, -1)
    X = zeta * (e - alpha) + zeta_s * (e - ctx.sigma(alpha))
    for n, g in enumerate(_table_ids(ctx, "G12")):
        tau = r_group(ctx.Q, g, ctx.N)
        it.equal(f"tau{n} commutes with zeta(e-a)+zeta^s(e-a^s)", tau * X, X * tau)
    xs = _random_elements(ctx, samples)
    ok_idem = all(ctx.tr_sigma(ctx.tr_sigma(x)) == ctx.tr_sigma(x) for x in xs)
    ok_inv = all(ctx.sigma(ctx.tr_sigma(x)) == ctx.tr_sigma(x) for x in xs)
    it.add(f"tr_sigma idempotent on {samples} random elements", ok_idem)
    it.add(f"tr_sigma output sigma-invariant on {samples} random elements", ok_inv)
    it.add("tr_sigma(e) = e", ctx.tr_sigma(e) == e)
    ring_identities(ctx, it)
    return it


def ring_identities(ctx: Context, it: _Items | None = None) -> _Items:
    """Quaternion sum identities and the alpha commutator identity."""
    it = it or _Items()
    e = ctx.one()
    i, j, k = ctx.el("i"), ctx.el("j"), ctx.el("k")
    s = e + i + j + k
    it.equal("(e+i+j+k)(3+i+j+k) = 6(e+i+j+k)", s * (s + 2), s * 6)
    it.add("(e+i+j+k) = (1-i)(1-j) mod 2", (s - (e - i) * (e - j)).all_even())
    alpha = ctx.el("alpha")
    for name, tau in (("i", i), ("j", j), ("k", k)):
        at = ctx.el("alpha_" + name)
        it.equal(
            f"(tau-a_tau)(e-a) = (e-a_tau a)(tau-e)+(e-a_tau), tau={name}",
            (tau - at) * (e - alpha),
            (e - at * alpha) * (tau - e) + (e - at),
        )
    return it


def _c4(ctx: Context) -> _Items:
    it = _Items()
    v = m_act(delta1_of(ctx), ctx.gen(0))
    it.add("eps(d1 e0) = 0", m_augment(v).is_zero())
    bad = [g for g in range(len(ctx.Q)) if not m_augment(m_act(r_group(ctx.Q, g, ctx.N), v)).is_zero()]
    it.add("eps(g d1 e0) = 0 for every g", not bad)
    it.add("eps(zeta d1 e0) = 0", m_augment(m_act(ctx.one() * ctx.w(0, 1), v)).is_zero())
    return it


def augmentation_kernel_oracle(mod: CosetModule, N: int) -> np.ndarray:
    """Howell form of ker(eps) written down directly.

    The rows are [x] - [last coset] for each coset x but the last, in both W-coordinates.
    Each row has leading entry 1 and its other entry lies in a non-pivot column,
    so the matrix is already in normal form.
    """
    n = len(mod)
    mask = (1 << N) - 1
    rows = np.zeros((2 * (n - 1), 2 * n), dtype=np.int64)
    for x in range(n - 1):
        for c in (0, 1):
            rows[2 * x + c, 2 * x + c] = 1
            rows[2 * x + c, 2 * (n - 1) + c] = mask
    return rows


def _c5(ctx: Context) -> tuple[_Items, dict]:
    it = _Items()
    mod = ctx.module(0)
    v = m_act(delta1_of(ctx), ctx.gen(0))
    span = i_span([v], "left")
    oracle = augmentation_kernel_oracle(mod, ctx.N)
    canon = span.canonical()
    it.add("span(R d1 e0) = ker eps (Howell bases equal)", canon.shape == oracle.shape and np.array_equal(canon, oracle))
    it.add("span(R d1 e0) inside ker eps", all(m_augment(CosetModuleElt.from_vector(mod, ctx.N, r)).is_zero() for r in span.rows()))
    diag = {"cosets": len(mod), "log2_span": span.log2_size(), "log2_kernel": 2 * ctx.N * (len(mod) - 1)}
    return it, diag


def _c6(ctx: Context) -> _Items:
    it = _Items()
    theta = res_theta_approx(ctx.variant, ctx)
    e = ctx.one()
    s = e + ctx.el("i") + ctx.el("j") + ctx.el("k")
    it.member("theta = 3+i+j+k mod (4, IPK1)", ctx.ideal("I4K"), theta - (s + 2))
    if ctx.variant == "plain":
        quat = (e - ctx.el("i")) * (e - ctx.el("j"))
        it.member("theta = (1-i)(1-j) mod (2, IPK1)", ctx.ideal("I2K"), theta - quat)
        it.member("theta d1 e0 in Itheta e0", ctx.ideal_image("Itheta", 0), m_act(theta * delta1_of(ctx), ctx.gen(0)))
        om = ctx.gid("omega")
        it.member("omega theta omega^-1 = theta mod Itheta", ctx.ideal("Itheta"), r_conj_group(theta, om) - theta)
    else:
        # tr_sigma(theta) differs from theta_phi by the finer ideal; theta_phi e1 lies in ker d1.
        fine = i_sum(ctx.ideal("Itheta_phi"), ctx.ideal("Itheta"))
        img = i_module_image(fine, ctx.module(0))
        it.member("tr_sigma(theta) d1 e0 in (Itheta_phi, Itheta) e0", img, m_act(theta * delta1_of(ctx), ctx.gen(0)))
        bad = [g for g in _table_ids(ctx, "G12") if not fine.contains(r_conj_group(theta, g) - theta)]
        it.add("tau tr_sigma(theta) tau^-1 = tr_sigma(theta) mod (Itheta_phi, Itheta)", not bad)
    return it


def _c7(ctx: Context, sides: str = "two-sided") -> _Items:
    it = _Items()
    d1 = delta1_of(ctx)
    d2 = res_delta2_approx(ctx.variant, ctx)
    d3 = delta3_of(ctx)
    theta = res_theta_approx(ctx.variant, ctx)
    I = ctx.ideal("I", sides)
    it.member("delta2 = theta mod I", I, d2 - theta)
    simple = ctx.el("alpha") + ctx.el("i") + ctx.el("j") + ctx.el("k")
    if ctx.variant == "phi":
        simple = ctx.tr_sigma(simple)
    it.member(
        "delta2 e1 = (alpha+i+j+k) e1 mod J",
        ctx.ideal_image("J", 1, sides),
        m_act(d2 - simple, ctx.gen(1)),
    )
    it.member("delta2 delta1 e0 in I e0", ctx.ideal_image("I", 0, sides), m_act(d2 * d1, ctx.gen(0)))
    it.member("delta3 delta2 e1 in I e1", ctx.ideal_image("I", 1, sides), m_act(d3 * d2, ctx.gen(1)))
    it.add("Itheta inside I", ctx.ideal("Itheta", sides) <= I)
    it.add("I inside J", I <= ctx.ideal("J", sides))
    if sides == "two-sided":
        rows = I.rows()
        right = closure_ops(I.ambient, "right")
        it.add("I is closed under right multiplication", all(not I.basis.reduce_batch(op(rows)).any() for op in right))
        it.add("delta3 I inside I", not I.basis.reduce_batch(_left_mult_rows(d3, rows)).any())
    return it


def _left_mult_rows(x: RingElt, rows: np.ndarray) -> np.ndarray:
    out = np.zeros_like(rows)
    for r in range(len(rows)):
        y = RingElt.from_vector(x.Q, x.prec, rows[r])
        out[r] = (x * y).to_vector()
    return out


def _c8(ctx: Context) -> _Items:
    it = _Items()
    e = ctx.one()
    alpha = ctx.el("alpha")
    alpha_s = ctx.sigma(alpha)
    x = (e - alpha) + (e - alpha_s)
    it.member("delta1 + delta1^sigma in (IPK1)^2", ctx.ideal("IK2"), x)
    if ctx.Q.galois:
        it.equal(
            "delta1 + delta1^sigma = tr_s(e-a) + tr_s(e-a^s)",
            x,
            ctx.tr_sigma(e - alpha) + ctx.tr_sigma(e - alpha_s),
        )
    return it


def _c9(ctx: Context) -> _Items:
    it = _Items()
    e = ctx.one()
    d1 = delta1_of(ctx)
    lhs = r_dual_partial1(ctx.Q, ctx.module(0), ctx.module(1), d1)
    s = e + ctx.el("i") + ctx.el("j") + ctx.el("k")
    tail = e - ctx.el("alpha^-1")
    if ctx.variant == "phi":
        tail = ctx.tr_sigma(tail)
    rhs = m_act(s * tail, ctx.gen(1))
    it.equal("d1*(e0*) = (e+i+j+k) tr(e - alpha^-1) e1*", lhs, rhs)
    if ctx.variant == "phi":
        # tr_sigma(delta3) = pi (e+i+j+k) tr_sigma(e - alpha^-1) pi^-1
        it.equal("tr_sigma(delta3) via conjugation", res_delta("delta3_phi", ctx), ctx.pi_conj(s * tail))
    return it


def _c10(ctx: Context) -> _Items:
    it = _Items()
    d1 = delta1_of(ctx)
    e0 = ctx.gen(0)
    v = m_act(d1, e0)
    table = "G12" if ctx.variant == "phi" else "C6"
    ids = _table_ids(ctx, table)
    it.add(f"tau e0 = e0 for tau in {table}", all(m_act(r_group(ctx.Q, g, ctx.N), e0) == e0 for g in ids))
    bad = [g for g in ids if m_act(r_group(ctx.Q, g, ctx.N) * d1, e0) != v]
    it.add(f"tau d1 e0 = d1 e0 for all tau in {table}", not bad)
    return it


def _variants_for(cid: str) -> tuple[str, ...]:
    if cid in ("C1", "C2"):
        return ("none",)
    if cid == "C3":
        return ("phi",)
    return VARIANTS


def res_check(cid: str, fgl: FGLTag | str = "honda", M: int = 5, N: int = 4, variant: str | None = None, seed: int = 0) -> list[CheckReport]:
    """Run one named check; returns one report per applicable variant."""
    fgl = FGLTag.parse(fgl)
    if cid not in CHECK_IDS:
        raise KeyError(f"unknown check {cid!r}")
    variants = _variants_for(cid) if variant is None else (variant,)
    out = []
    for var in variants:
        info = (fgl.value, M, N, var)
        if cid == "C1":
            out.append(_report(cid, info, _c1(fgl, N)))
            continue
        if cid == "C2":
            out.append(_report(cid, info, _c2(fgl)))
            continue
        if N < 2 or M < 3 or (cid in ("C6", "C7") and M < 4):
            out.append(CheckReport(cid, "inconclusive", fgl.value, M, N, var, diagnostics={"reason": "depth or precision too small"}))
            continue
        ctx = context(fgl.value, M, N, var, seed)
        diag = None
        if cid == "C3":
            it = _c3(ctx)
        elif cid == "C4":
            it = _c4(ctx)
        elif cid == "C5":
            it, diag = _c5(ctx)
        elif cid == "C6":
            it = _c6(ctx)
        elif cid == "C7":
            it = _c7(ctx)
            left = _c7(ctx, "left")
            diag = {"left_only_verdicts": [[n, ok] for n, ok in left.items]}
        elif cid == "C8":
            it = _c8(ctx)
        elif cid == "C9":
            it = _c9(ctx)
        else:
            it = _c10(ctx)
        out.append(_report(cid, info, it, diag))
    return out


# Each entry is (checks, [(M, N), ...]). At depth 6 the two-sided ideal closures behind
# C6 and C7 live in a ring of rank 3072 over Z/8 and do not fit the suite budget.
FAST = ((("C1", "C2", "C3", "C4", "C10"), ((4, 3),)),)
FULL = (
    (CHECK_IDS, ((5, 4),)),
    (("C1", "C2", "C3", "C4", "C5", "C8", "C9", "C10"), ((6, 3),)),
)


def res_suite(level: str = "fast", fgl: FGLTag | str = "honda", seed: int = 0, depths: tuple | None = None) -> list[CheckReport]:
    """Run a suite; `depths` replaces the suite's (M, N) pairs, keeping its check list."""
    if level not in ("fast", "full"):
        raise ValueError("level must be fast or full")
    plan = FAST if level == "fast" else FULL
    if depths is not None:
        plan = ((plan[0][0], tuple(depths)),)
    out = []
    for checks, pairs in plan:
        for M, N in pairs:
            for cid in checks:
                out.extend(res_check(cid, fgl, M, N, seed=seed))
    return out
