"""Command-line front end: constants, expression evaluation, quotients, verification, export."""

from __future__ import annotations

import argparse
import json
import re
import sys
from typing import Any

import numpy as np

from .endo import STANDARD_NAMES, EndoElt, FGLTag, e_inv, e_one, e_standard
from .groupring import RingElt, r_group, r_tr_c3
from .gtwo import GSTANDARD_NAMES, GElt, g_element, g_inv, g_mul, g_of
from .ideals import IDEAL_NAMES, HowellBasis
from .quotients import (
    DepthCapExceeded,
    InsufficientPrecision,
    VariantMismatch,
    depth_cap,
    q_build,
    q_info,
    q_normal_form,
)
from .resolution import (
    CHECK_IDS,
    DepthTooSmall,
    context,
    export_ring,
    import_ring,
    res_check,
    res_suite,
)
from .subgroups import SUBGROUP_NAMES, sg_order_profile, sg_standard
from .witt import WittApprox, w_constant, w_format

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_DEPTH = 0, 1, 2, 3

ELEMENT_PREC = 16
RING_PREC = 4
DEFAULT_DEPTH = 5


class UsageError(ValueError):
    pass


# -- expressions ---------------------------------------------------------------
#
#   expr   := term (("+" | "-") term)*
#   term   := ["-"] factor ("*" factor)*
#   factor := atom ("^" ["-"] INT)*
#   atom   := INT | NAME | FUNC "(" expr ")" | "(" expr ")"

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\S))")
FUNCS = ("tr_sigma", "tr_c3")
ATOMS = ("e", "zeta") + STANDARD_NAMES + GSTANDARD_NAMES


def tokenize(text: str) -> list[tuple[str, str]]:
    out = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise UsageError(f"cannot read expression at {text[pos:]!r}")
        num, name, op = m.groups()
        if num is not None:
            out.append(("int", num))
        elif name is not None:
            out.append(("name", name))
        else:
            if op not in "+-*^()":
                raise UsageError(f"unexpected character {op!r}")
            out.append(("op", op))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, tokens: list[tuple[str, str]]):
        self.t = tokens
        self.i = 0

    def peek(self) -> tuple[str, str] | None:
        return self.t[self.i] if self.i < len(self.t) else None

    def take(self, kind: str, value: str | None = None) -> str:
        tok = self.peek()
        if tok is None or tok[0] != kind or (value is not None and tok[1] != value):
            want = value or kind
            raise UsageError(f"expected {want!r}, found {tok[1] if tok else 'end of input'!r}")
        self.i += 1
        return tok[1]

    def at(self, value: str) -> bool:
        tok = self.peek()
        return tok is not None and tok[0] == "op" and tok[1] == value

    def expr(self) -> tuple:
        node = self.term()
        while self.at("+") or self.at("-"):
            op = self.take("op")
            node = ("add" if op == "+" else "sub", node, self.term())
        return node

    def term(self) -> tuple:
        neg = False
        if self.at("-"):
            self.take("op")
            neg = True
        node = self.factor()
        while self.at("*"):
            self.take("op")
            node = ("mul", node, self.factor())
        return ("neg", node) if neg else node

    def factor(self) -> tuple:
        node = self.atom()
        while self.at("^"):
            self.take("op")
            sign = 1
            if self.at("-"):
                self.take("op")
                sign = -1
            node = ("pow", node, sign * int(self.take("int")))
        return node

    def atom(self) -> tuple:
        tok = self.peek()
        if tok is None:
            raise UsageError("unexpected end of expression")
        if tok[0] == "int":
            return ("int", int(self.take("int")))
        if self.at("("):
            self.take("op")
            node = self.expr()
            self.take("op", ")")
            return node
        name = self.take("name")
        if name in FUNCS:
            self.take("op", "(")
            node = self.expr()
            self.take("op", ")")
            return ("call", name, node)
        if name not in ATOMS:
            raise UsageError(f"unknown name {name!r}")
        return ("atom", name)


def parse_expr(text: str) -> tuple:
    p = _Parser(tokenize(text))
    node = p.expr()
    if p.peek() is not None:
        raise UsageError(f"trailing input at {p.peek()[1]!r}")
    return node


def evaluate(node: tuple, alg: Any) -> Any:
    kind = node[0]
    if kind == "int":
        return alg.integer(node[1])
    if kind == "atom":
        return alg.atom(node[1])
    if kind == "neg":
        return alg.neg(evaluate(node[1], alg))
    if kind == "pow":
        return alg.power(evaluate(node[1], alg), node[2])
    if kind == "call":
        x = evaluate(node[2], alg)
        return alg.tr_sigma(x) if node[1] == "tr_sigma" else alg.tr_c3(x)
    x, y = evaluate(node[1], alg), evaluate(node[2], alg)
    return {"add": alg.add, "sub": alg.sub, "mul": alg.mul}[kind](x, y)


class ElementAlgebra:
    """Values are endomorphisms, or elements of G_2 once a Galois part appears."""

    def __init__(self, fgl: FGLTag, prec: int):
        self.fgl = fgl
        self.prec = prec

    def integer(self, n: int) -> EndoElt:
        return e_one(self.fgl, self.prec) * n

    def atom(self, name: str) -> EndoElt | GElt:
        if name == "e":
            return e_one(self.fgl, self.prec)
        if name == "zeta":
            return e_one(self.fgl, self.prec) * w_constant("zeta", self.prec)
        if name in GSTANDARD_NAMES:
            return g_element(name, self.fgl, self.prec)
        return e_standard(name, self.fgl, self.prec)

    @staticmethod
    def _endo(x: Any, what: str) -> EndoElt:
        if isinstance(x, GElt):
            if x.e:
                raise UsageError(f"{what} is not defined on elements with a Galois part")
            return x.u
        return x

    def neg(self, x: Any) -> Any:
        return GElt(-x.u, x.e) if isinstance(x, GElt) else -x

    def add(self, x: Any, y: Any) -> EndoElt:
        return self._endo(x, "+") + self._endo(y, "+")

    def sub(self, x: Any, y: Any) -> EndoElt:
        return self._endo(x, "-") - self._endo(y, "-")

    def mul(self, x: Any, y: Any) -> Any:
        if isinstance(x, GElt) or isinstance(y, GElt):
            gx = x if isinstance(x, GElt) else g_of(x)
            gy = y if isinstance(y, GElt) else g_of(y)
            return g_mul(gx, gy)
        return x * y

    def power(self, x: Any, n: int) -> Any:
        if n < 0:
            x = g_inv(x) if isinstance(x, GElt) else e_inv(x)
            n = -n
        out = GElt(e_one(self.fgl, self.prec), 0) if isinstance(x, GElt) else e_one(self.fgl, self.prec)
        for _ in range(n):
            out = self.mul(out, x)
        return out

    def tr_sigma(self, x: Any) -> EndoElt:
        # x^sigma is conjugation by [j-k], as in the group rings
        x = self._endo(x, "tr_sigma")
        z = w_constant("zeta", self.prec)
        u = g_element("bracket_jmk", self.fgl, self.prec).u
        xs = u * x.sigma() * e_inv(u)
        return -(z * x + (z * z) * xs)

    def tr_c3(self, x: Any) -> EndoElt:
        x = self._endo(x, "tr_c3")
        om = e_standard("omega", self.fgl, self.prec)
        om2 = om * om
        return x + om * x * e_inv(om) + om2 * x * e_inv(om2)


class RingAlgebra:
    """Values are elements of the group ring of a norm-one projective quotient."""

    def __init__(self, fgl: FGLTag, M: int, N: int, variant: str, seed: int = 0):
        self.ctx = context(fgl.value, M, N, variant, seed)

    def integer(self, n: int) -> RingElt:
        return self.ctx.one() * n

    def atom(self, name: str) -> RingElt:
        if name == "zeta":
            return self.ctx.one() * self.ctx.w(0, 1)
        if name == "sigma" and not self.ctx.Q.galois:
            raise UsageError("sigma needs the phi ring")
        return self.ctx.el(name)

    def neg(self, x: RingElt) -> RingElt:
        return -x

    def add(self, x: RingElt, y: RingElt) -> RingElt:
        return x + y

    def sub(self, x: RingElt, y: RingElt) -> RingElt:
        return x - y

    def mul(self, x: RingElt, y: RingElt) -> RingElt:
        return x * y

    def power(self, x: RingElt, n: int) -> RingElt:
        if n < 0:
            if len(x.c) != 1 or next(iter(x.c.values())) != (1, 0):
                raise UsageError("only group elements can be inverted in the ring")
            g = next(iter(x.c))
            x = r_group(x.Q, x.Q.inv(g), x.prec)
            n = -n
        out = self.ctx.one()
        for _ in range(n):
            out = out * x
        return out

    def tr_sigma(self, x: RingElt) -> RingElt:
        if not self.ctx.Q.galois:
            raise UsageError("tr_sigma needs the phi ring")
        return self.ctx.tr_sigma(x)

    def tr_c3(self, x: RingElt) -> RingElt:
        return r_tr_c3(x, self.ctx.gid("omega"))


def name_of(x: Any, fgl: FGLTag, prec: int) -> str | None:
    """A standard name equal to x, or with a leading minus sign, if there is one."""
    for name in ("e",) + STANDARD_NAMES + GSTANDARD_NAMES:
        try:
            y = g_element(name, fgl, prec)
        except (KeyError, ValueError, ArithmeticError):
            continue
        for sign, cand in (("", y), ("-", GElt(-y.u, y.e))):
            if isinstance(x, GElt) and x == cand:
                return sign + name
            if isinstance(x, EndoElt) and cand.e == 0 and x == cand.u:
                return sign + name
    return None


# -- output helpers -----------------------------------------------------------


def w_json(x: WittApprox) -> dict:
    return {"a0": hex(x.a0), "a1": hex(x.a1), "prec": x.prec}


def endo_json(x: EndoElt) -> dict:
    return {"fgl": x.fgl.value, "a": w_json(x.a), "b": w_json(x.b)}


def endo_text(x: EndoElt) -> str:
    return f"a = {w_format(x.a)}, b = {w_format(x.b)}"


def gelt_json(x: GElt) -> dict:
    return {**endo_json(x.u), "flag": x.e}


def _short(x: GElt) -> str:
    u = x.u
    return f"<{u.a.a0:x},{u.a.a1:x}|{u.b.a0:x},{u.b.a1:x}|{x.e}>"


def export_subgroup(name: str, fgl: FGLTag, prec: int) -> dict:
    t = sg_standard(name, fgl, prec)
    return {"subgroup": name, "fgl": fgl.value, "prec": prec, "elements": [gelt_json(x) for x in t.elements]}


def import_subgroup(d: dict) -> list[GElt]:
    fgl = FGLTag.parse(d["fgl"])
    out = []
    for x in d["elements"]:
        a = WittApprox(int(x["a"]["a0"], 16), int(x["a"]["a1"], 16), x["a"]["prec"])
        b = WittApprox(int(x["b"]["a0"], 16), int(x["b"]["a1"], 16), x["b"]["prec"])
        out.append(GElt(EndoElt(a, b, fgl), x["flag"]))
    return out


def export_ideal(name: str, fgl: FGLTag, M: int, N: int, variant: str, seed: int = 0) -> dict:
    ctx = context(fgl.value, M, N, variant, seed)
    sub = ctx.ideal(name)
    rows = sub.canonical()
    return {
        "ideal": name,
        "quotient": {**ctx.Q.describe(), "prec": N},
        "log2_size": sub.log2_size(),
        "rows": [[hex(int(v)) for v in r] for r in rows],
    }


def import_ideal(d: dict) -> np.ndarray:
    q = d["quotient"]
    Q = q_build(q["M"], q["variant"], q["fgl"], norm_one=q["norm_one"])
    hb = HowellBasis(2 * len(Q), q["prec"])
    if d["rows"]:
        hb.insert_many(np.array([[int(v, 16) for v in r] for r in d["rows"]], dtype=np.int64))
    return hb.canonical()


def reimport(d: dict) -> dict:
    """Parse an exported document and export it again."""
    if "coeffs" in d:
        return export_ring(import_ring(d))
    if "elements" in d:
        elts = import_subgroup(d)
        return {**{k: d[k] for k in ("subgroup", "fgl", "prec")}, "elements": [gelt_json(x) for x in elts]}
    if "rows" in d:
        rows = import_ideal(d)
        return {**{k: d[k] for k in ("ideal", "quotient", "log2_size")}, "rows": [[hex(int(v)) for v in r] for r in rows]}
    raise UsageError("unrecognised export document")


# -- commands -------------------------------------------------------------------


def _emit(args: argparse.Namespace, text: str, data: Any) -> None:
    if args.output == "json":
        print(json.dumps(data, sort_keys=True, indent=2))
    else:
        print(text)


def _prec(args: argparse.Namespace, default: int) -> int:
    return default if args.prec2 is None else args.prec2


def cmd_constants(args: argparse.Namespace) -> int:
    N = _prec(args, ELEMENT_PREC)
    fgl = FGLTag.parse(args.fgl)
    data: dict = {}
    lines = []
    for name in ("zeta", "alpha", "pi", "sqrt_m7"):
        w = w_constant(name, N)
        data[name] = w_json(w)
        lines.append(f"{name:<8} {w_format(w)}")
    for name in ("i", "j", "k", "omega"):
        x = e_standard(name, fgl, N)
        data[name] = endo_json(x)
        lines.append(f"{name:<8} {endo_text(x)}")
    _emit(args, "\n".join(lines), data)
    return EXIT_OK


def cmd_eval(args: argparse.Namespace) -> int:
    fgl = FGLTag.parse(args.fgl)
    node = parse_expr(args.expr)
    if args.ring:
        N = _prec(args, RING_PREC)
        x = evaluate(node, RingAlgebra(fgl, args.depth, N, args.ring, args.seed))
        data = export_ring(x)
        lines = [f"{form}  {a0} {a1}" for form, a0, a1 in data["coeffs"]] or ["0"]
        _emit(args, "\n".join(lines), data)
        return EXIT_OK
    N = _prec(args, ELEMENT_PREC)
    x = evaluate(node, ElementAlgebra(fgl, N))
    name = name_of(x, fgl, N)
    if isinstance(x, GElt):
        data = {"value": gelt_json(x)}
        text = f"{endo_text(x.u)}, flag = {x.e}"
    else:
        data = {"value": endo_json(x)}
        text = endo_text(x)
    if name is not None:
        data["name"] = name
        text = name
    _emit(args, text, data)
    return EXIT_OK


def cmd_normal_form(args: argparse.Namespace) -> int:
    fgl = FGLTag.parse(args.fgl)
    N = _prec(args, ELEMENT_PREC)
    x = evaluate(parse_expr(args.elt), ElementAlgebra(fgl, N))
    g = x if isinstance(x, GElt) else g_of(x)
    variant = args.variant or ("G2" if g.e else "S2")
    df = q_normal_form(g, args.depth, variant)
    _emit(args, str(df), {"normal_form": str(df), "M": args.depth, "variant": variant, "fgl": fgl.value})
    return EXIT_OK


def cmd_subgroup(args: argparse.Namespace) -> int:
    if args.name not in SUBGROUP_NAMES:
        raise UsageError(f"unknown subgroup {args.name!r}; choose from {', '.join(SUBGROUP_NAMES)}")
    fgl = FGLTag.parse(args.fgl)
    N = _prec(args, 8)
    t = sg_standard(args.name, fgl, N, projective=args.projective)
    profile = sg_order_profile(t)
    names = [name_of(x, fgl, N) or _short(x) for x in t.elements]
    data = {"subgroup": args.name, "order": len(t), "projective": args.projective, "order_profile": profile, "elements": names}
    text = f"{args.name}: order {len(t)}, element orders {profile}\n" + " ".join(names)
    _emit(args, text, data)
    return EXIT_OK


def cmd_quotient_info(args: argparse.Namespace) -> int:
    Q = q_build(args.depth, args.variant or "S2", args.fgl, norm_one=args.norm_one, seed=args.seed)
    info = q_info(Q)
    text = "\n".join(f"{k}: {v}" for k, v in info.items())
    _emit(args, text, info)
    return EXIT_OK


def _suite_exit(reports: list) -> int:
    if any(r.status == "fail" for r in reports):
        return EXIT_FAIL
    if any(r.status == "inconclusive" for r in reports):
        return EXIT_DEPTH
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    if args.check:
        if args.check not in CHECK_IDS:
            raise UsageError(f"unknown check {args.check!r}")
        N = _prec(args, RING_PREC)
        if args.depth > depth_cap():
            raise DepthCapExceeded(f"depth {args.depth} exceeds cap {depth_cap()}")
        reports = res_check(args.check, args.fgl, args.depth, N, variant=args.variant, seed=args.seed)
    else:
        reports = res_suite(args.suite, args.fgl, seed=args.seed)
    _emit(args, "\n".join(r.line() for r in reports), [r.to_json() for r in reports])
    return _suite_exit(reports)


def cmd_export(args: argparse.Namespace) -> int:
    fgl = FGLTag.parse(args.fgl)
    variant = args.variant or "phi"
    if args.ideal:
        if args.ideal not in IDEAL_NAMES:
            raise UsageError(f"unknown ideal {args.ideal!r}; choose from {', '.join(IDEAL_NAMES)}")
        doc = export_ideal(args.ideal, fgl, args.depth, _prec(args, RING_PREC), variant, args.seed)
    elif args.subgroup:
        if args.subgroup not in SUBGROUP_NAMES:
            raise UsageError(f"unknown subgroup {args.subgroup!r}")
        doc = export_subgroup(args.subgroup, fgl, _prec(args, 8))
    else:
        N = _prec(args, RING_PREC)
        doc = export_ring(evaluate(parse_expr(args.ring_elt), RingAlgebra(fgl, args.depth, N, variant, args.seed)))
    if args.check_roundtrip and reimport(doc) != doc:
        print("export did not survive re-import", file=sys.stderr)
        return EXIT_FAIL
    print(json.dumps(doc, sort_keys=True))
    return EXIT_OK


def cmd_import(args: argparse.Namespace) -> int:
    with open(args.file) if args.file != "-" else sys.stdin as fh:
        doc = json.load(fh)
    print(json.dumps(reimport(doc), sort_keys=True))
    return EXIT_OK


# -- parser -------------------------------------------------------------------------


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--fgl", choices=("honda", "elliptic"), default="honda")
    p.add_argument("--prec2", type=int, default=None, help="coefficients modulo 2^N")
    p.add_argument("--depth", type=int, default=DEFAULT_DEPTH, help="quotient depth M")
    p.add_argument("--output", choices=("text", "json"), default="text")
    p.add_argument("--seed", type=int, default=0)
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    ap = argparse.ArgumentParser(prog="morava", description="Finite-precision checks for the height-2 duality resolution.")
    sub = ap.add_subparsers(dest="command", required=True)

    sub.add_parser("constants", parents=[common], help="print alpha, pi, sqrt(-7), i, j, k, omega")

    p = sub.add_parser("eval", parents=[common], help="evaluate an expression")
    p.add_argument("expr")
    p.add_argument("--ring", choices=("plain", "phi"), default=None, help="evaluate in a group ring instead")

    p = sub.add_parser("normal-form", parents=[common], help="digit normal form of an element")
    p.add_argument("elt")
    p.add_argument("--variant", choices=("S2", "G2", "PS2", "PG2"), default=None)

    p = sub.add_parser("subgroup", parents=[common], help="list a named finite subgroup")
    p.add_argument("name")
    p.add_argument("--projective", action="store_true")

    p = sub.add_parser("quotient-info", parents=[common], help="sizes of a finite quotient and its subgroup images")
    p.add_argument("--variant", choices=("S2", "G2", "PS2", "PG2"), default=None)
    p.add_argument("--norm-one", action="store_true")

    p = sub.add_parser("verify", parents=[common], help="run checks")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--suite", choices=("fast", "full"), default="fast")
    g.add_argument("--check", default=None)
    p.add_argument("--variant", choices=("plain", "phi"), default=None)

    p = sub.add_parser("export", parents=[common], help="JSON export")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--ideal")
    g.add_argument("--subgroup")
    g.add_argument("--ring-elt")
    p.add_argument("--variant", choices=("plain", "phi"), default=None)
    p.add_argument("--check-roundtrip", action="store_true", help="re-import before printing")

    p = sub.add_parser("import", parents=[common], help="re-import an export and print it again")
    p.add_argument("file", help="path, or - for stdin")
    return ap


_COMMANDS = {
    "constants": cmd_constants,
    "eval": cmd_eval,
    "normal-form": cmd_normal_form,
    "subgroup": cmd_subgroup,
    "quotient-info": cmd_quotient_info,
    "verify": cmd_verify,
    "export": cmd_export,
    "import": cmd_import,
}


def _validate(args: argparse.Namespace) -> None:
    if args.prec2 is not None and not 3 <= args.prec2 <= 64:
        raise UsageError("--prec2 must lie in [3, 64]")
    if not 2 <= args.depth <= 8:
        raise UsageError("--depth must lie in [2, 8]")


def cmd_dispatch(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        _validate(args)
        return _COMMANDS[args.command](args)
    except (UsageError, KeyError, VariantMismatch, json.JSONDecodeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InsufficientPrecision, DepthCapExceeded, DepthTooSmall) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DEPTH


def main() -> None:
    sys.exit(cmd_dispatch())


if __name__ == "__main__":
    main()
