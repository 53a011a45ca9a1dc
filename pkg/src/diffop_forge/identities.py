"""Executable catalog of the supporting identities, suites A through F.

Every check has an id, the arena it is claimed in (Q: exact identity in
Q[x,y,z]; R: identity modulo f), the residual and a state.  States are
"pass", "fail", "Q-only-mod-f" (an arena-Q identity that only holds modulo
f) and "shape-error".  Informational checks are reported but never decide
the outcome of a suite.

Role permutations {a,b,c} of {x,y,z} come from one template per identity.
A handful of printed statements are misprinted; the checked form is the
one supported by the surrounding proof, and the printed form is kept
alongside as an informational probe.
"""

from __future__ import annotations

from fractions import Fraction as Q
from itertools import permutations
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

from .errors import DimensionMismatch, MathCheckError
from .glossary import GlossaryTable, build_glossary, euler_shift, hamiltonian_power_top, verify_matrix_factorization
from .matrix import PolyMatrix, block, matmul, reduce_mod_f
from .poly import ZERO, Polynomial, X, Y, Z
from .ring import RingContext, normal_form
from .weyl import DiffOp, compose, euler, hamiltonian

VAR = {"x": X, "y": Y, "z": Z}
PERMS = ["".join(p) for p in permutations("xyz")]
CYCLIC = ["xyz", "yzx", "zxy"]
PAIR_OF = {"x": "yz", "y": "zx", "z": "xy"}
SUITES = ("A", "B", "C", "D", "EF", "mf", "complexes", "chainmaps")

Residual = Union[Polynomial, PolyMatrix, DiffOp]


class IdentityCheck:
    """One evaluated identity: passed exactly when the residual vanishes in its arena."""

    __slots__ = ("id", "arena", "residual", "state", "informational", "note")

    def __init__(self, id: str, arena: str, residual: Optional[Residual], state: str, informational: bool = False, note: str = ""):
        self.id = id
        self.arena = arena
        self.residual = residual
        self.state = state
        self.informational = informational
        self.note = note

    @property
    def passed(self) -> bool:
        return self.state == "pass"

    def __repr__(self) -> str:
        tag = " (info)" if self.informational else ""
        return f"IdentityCheck({self.id}, {self.arena}, {self.state}{tag})"

    def to_json(self, verbose: bool = False) -> dict:
        out = {"id": self.id, "arena": self.arena, "state": self.state, "passed": self.passed, "informational": self.informational}
        if self.note:
            out["note"] = self.note
        if verbose and not self.passed and self.residual is not None:
            out["residual"] = render_residual(self.residual)
        return out


def render_residual(r: Residual):
    from .parser import render_poly

    if isinstance(r, Polynomial):
        return render_poly(r)
    if isinstance(r, PolyMatrix):
        return r.to_json()["entries"]
    return r.to_json()


def _reduce(r: Residual, ctx: RingContext) -> Residual:
    if isinstance(r, Polynomial):
        return normal_form(r, ctx)
    if isinstance(r, PolyMatrix):
        return reduce_mod_f(r, ctx)
    return r.reduce(ctx)


def evaluate(ctx: RingContext, id: str, arena: str, residual: Residual, informational: bool = False, note: str = "") -> IdentityCheck:
    """Classify lhs - rhs in the stated arena."""
    if arena == "Q":
        if residual.is_zero():
            return IdentityCheck(id, "Q", residual, "pass", informational, note)
        state = "Q-only-mod-f" if _reduce(residual, ctx).is_zero() else "fail"
        return IdentityCheck(id, "Q", residual, state, informational, note)
    red = _reduce(residual, ctx)
    return IdentityCheck(id, "R", red, "pass" if red.is_zero() else "fail", informational, note)


def evaluate_matrix(ctx: RingContext, id: str, arena: str, build: Callable[[], PolyMatrix], informational: bool = False, note: str = "") -> IdentityCheck:
    """Like evaluate, but a dimension mismatch in build is reported as shape-error."""
    try:
        res = build()
    except DimensionMismatch as exc:
        return IdentityCheck(id, arena, None, "shape-error", informational, note or str(exc))
    return evaluate(ctx, id, arena, res, informational, note)


class _Sym:
    """Short accessors for partials, cofactors and Hamiltonians by variable name."""

    def __init__(self, ctx: RingContext):
        self.ctx = ctx
        self.d = ctx.d
        self.k = Q(1, ctx.d - 1)

    def f(self, idx: str = "") -> Polynomial:
        return self.ctx.pd(idx)

    def D(self, a: str, b: str) -> Polynomial:
        return self.ctx.cofactor(a, b)

    def Dd(self, a: str, b: str, c: str) -> Polynomial:
        return self.ctx.cofactor(a, b).partial(c)

    def dl(self, a: str = "") -> Polynomial:
        return self.ctx.delta if not a else self.ctx.delta_grad["xyz".index(a)]

    def H(self, pair: str, g: Polynomial) -> Polynomial:
        return self.ctx.ham(pair, g)


# suite A: Euler-type and cofactor identities

def run_appendix_A(ctx: RingContext) -> List[IdentityCheck]:
    s = _Sym(ctx)
    d, k, f = s.d, s.k, s.f
    out: List[IdentityCheck] = []
    x, y, z = X, Y, Z
    E_f = x * f("x") + y * f("y") + z * f("z")
    out.append(evaluate(ctx, "A.euler", "Q", E_f - f().scale(d)))
    out.append(evaluate(ctx, "A.euler.R", "R", E_f))

    for p in PERMS:
        a, b, c = p
        A, B, C = VAR[a], VAR[b], VAR[c]
        out.append(evaluate(ctx, f"A.2-1deriv.{p}", "Q", A * f(a + a) + B * f(a + b) + C * f(a + c) - f(a).scale(d - 1)))

    second = x * x * f("xx") + y * y * f("yy") + z * z * f("zz") + 2 * x * y * f("xy") + 2 * x * z * f("xz") + 2 * y * z * f("yz")
    out.append(evaluate(ctx, "A.2nd-Euler", "R", second))
    out.append(evaluate(ctx, "A.2nd-Euler.Qprobe", "Q", second, True, "equals d(d-1)f in Q[x,y,z]"))

    for p in PERMS:
        a, b, c = p
        out.append(evaluate(ctx, f"A.det-exp1.{p}", "Q", s.dl() - (f(a + a) * s.D(a, a) + f(a + b) * s.D(a, b) + f(a + c) * s.D(a, c))))
        out.append(evaluate(ctx, f"A.det-exp4.{p}", "Q", f(a + a) * s.D(a, b) + f(a + b) * s.D(b, b) + f(a + c) * s.D(b, c)))
    for p in PERMS:
        a, b, c = p
        rhs = (f(a) * s.D(a, a) + f(b) * s.D(a, b) + f(c) * s.D(a, c)).scale(d - 1)
        out.append(evaluate(ctx, f"A.eqCram.{p}", "Q", VAR[a] * s.dl() - rhs))

    D = s.D
    mindiff = [
        (x * D("x", "y") - y * D("x", "x"), f("z") * f("yz") - f("y") * f("zz")),
        (y * D("x", "y") - x * D("y", "y"), f("z") * f("xz") - f("x") * f("zz")),
        (x * D("y", "z") - y * D("x", "z"), f("y") * f("xz") - f("x") * f("yz")),
        (z * D("y", "y") - y * D("z", "y"), f("z") * f("xx") - f("x") * f("xz")),
        (y * D("z", "z") - z * D("z", "y"), f("y") * f("xx") - f("x") * f("xy")),
        (z * D("x", "x") - x * D("x", "z"), f("z") * f("yy") - f("y") * f("zy")),
        (z * D("x", "y") - x * D("y", "z"), f("x") * f("zy") - f("z") * f("xy")),
        (z * D("x", "z") - x * D("z", "z"), f("y") * f("xy") - f("x") * f("yy")),
        (z * D("x", "y") - y * D("x", "z"), f("y") * f("xz") - f("z") * f("xy")),
    ]
    for i, (lhs, rhs) in enumerate(mindiff, 1):
        out.append(evaluate(ctx, f"A.MinDiff.{i}", "Q", lhs - rhs.scale(d - 1)))

    for p in PERMS:
        a, b, c = p
        A, B, C = VAR[a], VAR[b], VAR[c]
        out.append(evaluate(ctx, f"A.eq3-2aa.{p}", "Q", A * f(a * 3) + B * f(a + a + b) + C * f(a + a + c) - f(a + a).scale(d - 2)))
        out.append(evaluate(ctx, f"A.eq3-2ab.{p}", "Q", A * f(a + a + b) + B * f(a + b + b) + C * f(a + b + c) - f(a + b).scale(d - 2)))
    for p in PERMS:
        a, b, c = p
        A, B, C = VAR[a], VAR[b], VAR[c]
        common = A * A * f(a * 3) + B * B * f(a + b + b) + C * C * f(a + c + c) + 2 * A * B * f(a + a + b) + 2 * B * C * f(a + b + c)
        rhs = f(a).scale((d - 2) * (d - 1))
        out.append(evaluate(ctx, f"A.eq2-3.{p}", "Q", common + 2 * A * C * f(a + a + c) - rhs))
        if p == "xyz":
            out.append(evaluate(ctx, "A.eq2-3.printed.xyz", "Q", common + 2 * A * C * f(a + c + c) - rhs, True, "printed 2ac f_acc"))

    third = (
        x ** 3 * f("xxx") + y ** 3 * f("yyy") + z ** 3 * f("zzz")
        + 3 * (x * x * y * f("xxy") + x * y * y * f("xyy") + y * y * z * f("yyz") + y * z * z * f("yzz") + x * x * z * f("xxz") + x * z * z * f("xzz"))
        + 6 * x * y * z * f("xyz")
    )
    out.append(evaluate(ctx, "A.3rd-Euler", "R", third))
    out.append(evaluate(ctx, "A.3rd-Euler.Qprobe", "Q", third, True, "equals d(d-1)(d-2)f in Q[x,y,z]"))

    kk = Q(1, (d - 1) ** 2)
    for p in PERMS:
        a, b, c = p
        A, B, C = VAR[a], VAR[b], VAR[c]
        cof = (C * C * D(a, b) + A * B * D(c, c) - A * C * D(b, c) - B * C * D(a, c)).scale(kk)
        lhs = f(a) * f(b)
        out.append(evaluate(ctx, f"A.PD-prodab.{p}", "Q", lhs - cof - (f(a + b) * f()).scale(Q(d, d - 1))))
        out.append(evaluate(ctx, f"A.PD-prodab.R.{p}", "R", lhs - cof))
    for p in PERMS:
        a, b, c = p
        A, B, C = VAR[a], VAR[b], VAR[c]
        cof = (-(B * B * D(c, c)) - C * C * D(b, b) + 2 * B * C * D(b, c)).scale(kk)
        lhs = f(a) * f(a)
        out.append(evaluate(ctx, f"A.PD-prodaa.{p}", "Q", lhs - cof - (f(a + a) * f()).scale(Q(d, d - 1))))
        out.append(evaluate(ctx, f"A.PD-prodaa.R.{p}", "R", lhs - cof))

    for p in PERMS:
        a, b, c = p
        rhs = (f(a) * s.Dd(a, a, b) + f(b) * s.Dd(a, b, b) + f(c) * s.Dd(a, c, b)).scale(d - 1)
        out.append(evaluate(ctx, f"A.eqDiffCram.{p}", "Q", VAR[a] * s.dl(b) - rhs))
        rhs = s.dl().scale(d - 2) + (f(a) * s.Dd(a, a, a) + f(b) * s.Dd(a, b, a) + f(c) * s.Dd(a, c, a)).scale(d - 1)
        out.append(evaluate(ctx, f"A.eqDiff-Cram-same.{p}", "Q", VAR[a] * s.dl(a) - rhs))

    for a in "xyz":
        F = ctx.hessian.map(lambda e, a=a: e.partial(a))
        out.append(evaluate(ctx, f"A.Der-delt.{a}", "Q", s.dl(a) - _trace(matmul(ctx.adj, F))))
        out.append(evaluate(ctx, f"A.Der-delt.printed.{a}", "Q", s.dl(a) - _trace(matmul(ctx.hessian, F)), True, "printed tr(Delta F)"))

    for p in PERMS:
        a, b, c = p
        out.append(evaluate(ctx, f"A.RelDerMin.{p}", "Q", s.Dd(a, a, a) + s.Dd(a, b, b) + s.Dd(a, c, c)))
    return out


def _trace(M: PolyMatrix) -> Polynomial:
    acc = ZERO
    for i in range(M.rows):
        acc = acc + M[i, i]
    return acc


# suite B: Hamiltonian identities

def _mult(p: Polynomial) -> DiffOp:
    return DiffOp.multiplication(p)


def run_appendix_B(ctx: RingContext) -> List[IdentityCheck]:
    s = _Sym(ctx)
    d, k, f, H, D, dl = s.d, s.k, s.f, s.H, s.D, s.dl
    out: List[IdentityCheck] = []

    fdr = compose(_mult(f("x")), hamiltonian(ctx, "yz")) + compose(_mult(f("y")), hamiltonian(ctx, "zx")) + compose(_mult(f("z")), hamiltonian(ctx, "xy"))
    out.append(evaluate(ctx, "B.FDR-Ham", "Q", fdr))
    for p in PERMS:
        a, b, c = p
        op = compose(_mult(f(a)), euler()) - compose(_mult(VAR[c]), _ham_op(ctx, c + a)) + compose(_mult(VAR[b]), _ham_op(ctx, a + b))
        out.append(evaluate(ctx, f"B.Rel-EHabHac.{p}", "R", op))
        if p == "xyz":
            out.append(evaluate(ctx, "B.Rel-EHabHac.Qprobe.xyz", "Q", op, True, "the d_a coefficient is d*f"))

    for p in PERMS:
        a, b, c = p
        out.append(evaluate(ctx, f"B.HamRel1.{p}", "Q", H(c + a, D(a, a)) - H(b + c, D(a, b)) - (VAR[a] * dl(c)).scale(k)))
    for p in PERMS:
        a, b, c = p
        rhs = (VAR[b] * dl(b) - dl().scale(d - 2)).scale(k)
        out.append(evaluate(ctx, f"B.HamRel2.{p}", "Q", H(b + c, D(b, c)) - H(a + b, D(a, b)) - rhs))

    x, y, z = X, Y, Z
    out.append(evaluate(ctx, "B.HamRel4+5Comb", "Q",
                        H("yz", D("y", "z")).scale(2) - H("zx", D("x", "z")) - H("xy", D("x", "y")) - (y * dl("y") - z * dl("z")).scale(k)))
    out.append(evaluate(ctx, "B.HamRel4-5Comb", "Q",
                        H("xy", D("x", "y")) - H("zx", D("x", "z")) + (y * dl("y") + z * dl("z")).scale(k) - dl().scale(Q(2 * (d - 2), d - 1))))
    out.append(evaluate(ctx, "B.HamRel4-5Comb2", "Q",
                        H("xy", D("x", "y")) - H("zx", D("x", "z")) + (dl().scale(d - 2) - x * dl("x")).scale(k)))

    on_partial = [
        ("fx", f("z") * f("yx") - f("y") * f("zx"), y * D("x", "z") - z * D("x", "y")),
        ("fy", f("z") * f("yy") - f("y") * f("zy"), z * D("x", "x") - x * D("x", "z")),
        ("fz", f("z") * f("yz") - f("y") * f("zz"), x * D("x", "y") - y * D("x", "x")),
    ]
    for name, mid, rhs in on_partial:
        g = f(name[1])
        out.append(evaluate(ctx, f"B.H-on-{name}.expand", "Q", H("yz", g) - mid))
        out.append(evaluate(ctx, f"B.H-on-{name}", "Q", H("yz", g) - rhs.scale(k)))

    for p in PERMS:
        a, b, c = p
        bc = b + c
        hd = f(c) * dl(b) - f(b) * dl(c)
        lhs1 = f(a) * H(bc, D(a, a)) + f(b) * H(bc, D(a, b)) + f(c) * H(bc, D(a, c))
        out.append(evaluate(ctx, f"B.H-on-Cram1.{p}", "Q", lhs1 - (VAR[a] * hd).scale(k)))
        if p == "xyz":
            printed = f(a) * H(bc, D(a, a)) + f(b) * H(bc, D(a, b)) + f(c) * H(bc, D(b, c))
            out.append(evaluate(ctx, "B.H-on-Cram1.printed.xyz", "Q", printed - (VAR[a] * hd).scale(k), True, "printed Delta_bc in the last term"))
        lhs2 = f(a) * H(bc, D(a, b)) + f(b) * H(bc, D(b, b)) + f(c) * H(bc, D(b, c))
        rhs2 = (VAR[b] * hd).scale(k) - (dl() * f(c)).scale(Q(d - 2, d - 1))
        out.append(evaluate(ctx, f"B.H-on-Cram2.{p}", "Q", lhs2 - rhs2))
        lhs3 = f(a) * H(bc, D(a, c)) + f(b) * H(bc, D(b, c)) + f(c) * H(bc, D(c, c))
        rhs3 = (VAR[c] * hd).scale(k) + (dl() * f(b)).scale(Q(d - 2, d - 1))
        out.append(evaluate(ctx, f"B.H-on-Cram3.{p}", "Q", lhs3 - rhs3))
        lhs4 = H(bc, f(a)) * D(a, a) + H(bc, f(b)) * D(a, b) + H(bc, f(c)) * D(a, c)
        out.append(evaluate(ctx, f"B.H-on-Cram4.{p}", "Q", lhs4))

    for i, (u, v, w) in enumerate([("xx", "xy", "xz"), ("xy", "yy", "yz"), ("xz", "yz", "zz")], 1):
        out.append(evaluate(ctx, f"B.Hij-on-2der.{i}", "Q", H("yz", f(u)) + H("zx", f(v)) + H("xy", f(w))))

    def detexp(pair: str, rows: Tuple[str, str, str], with_delta: bool) -> Polynomial:
        lhs = f(rows[0]) * H(pair, D("x", "x")) + f(rows[1]) * H(pair, D("x", "y")) + f(rows[2]) * H(pair, D("x", "z"))
        corr = H(pair, f(rows[0])) * D("x", "x") + H(pair, f(rows[1])) * D("x", "y") + H(pair, f(rows[2])) * D("x", "z")
        rhs = (H(pair, dl()) if with_delta else ZERO) - corr
        return lhs - rhs

    out.append(evaluate(ctx, "B.H-on-detexp1", "Q", detexp("yz", ("xx", "xy", "xz"), True)))
    out.append(evaluate(ctx, "B.Hzx-on-detexp6", "Q", detexp("zx", ("xy", "yy", "yz"), False)))
    out.append(evaluate(ctx, "B.Hxy-on-detexp8", "Q", detexp("xy", ("xz", "yz", "zz"), False)))
    return out


def _ham_op(ctx: RingContext, pair: str) -> DiffOp:
    """H for any ordered pair, with H_zy = -H_yz and so on."""
    return hamiltonian(ctx, pair)


# suite C: relations among the columns of M_0(2) and M_0(3)

class _Columns:
    """Named top-order columns of M_0(2) and M_0(3)."""

    def __init__(self, g: GlossaryTable):
        self.g = g
        m2, m3 = g.M0_2, g.M0_3
        self.c2 = {n: m2.col(j) for j, n in enumerate(["E2", "EHyz", "EHzx", "EHxy", "ax", "ay", "az"])}
        self.c3 = {n: m3.col(j) for j, n in enumerate(["E3", "E2Hyz", "E2Hzx", "E2Hxy", "Eax", "Eay", "Eaz", "zx", "zy", "zz"])}

    def eh(self, pair: str, order: int = 2) -> List[Polynomial]:
        key = "EH" if order == 2 else "E2H"
        table = self.c2 if order == 2 else self.c3
        if key + pair in table:
            return table[key + pair]
        return [-e for e in table[key + pair[::-1]]]


def _combo(terms: Sequence[Tuple[object, List[Polynomial]]]) -> PolyMatrix:
    """Column sum of coefficient * column; coefficients are polynomials or rationals."""
    n = len(terms[0][1])
    acc = [ZERO] * n
    for coeff, col in terms:
        for i, e in enumerate(col):
            if not e:
                continue
            acc[i] = acc[i] + (coeff * e if isinstance(coeff, Polynomial) else e.scale(coeff))
    return PolyMatrix.column(acc)


def run_appendix_C(ctx: RingContext, g: Optional[GlossaryTable] = None) -> List[IdentityCheck]:
    g = g or build_glossary(ctx)
    s = _Sym(ctx)
    d, f, D, dl = s.d, s.f, s.D, s.dl
    dp = d - 1
    dpp = dp ** 3 * (d - 2)
    cols = _Columns(g)
    c2, c3 = cols.c2, cols.c3
    out: List[IdentityCheck] = []

    for order, tag in ((2, ""), (3, "E.")):
        Ek = c2["E2"] if order == 2 else c3["E3"]
        al = (lambda v: c2["a" + v]) if order == 2 else (lambda v: c3["Ea" + v])
        for p in PERMS:
            a, b, c = p
            out.append(evaluate(ctx, f"C.{tag}E2-EHca-EHab.{p}", "R", _combo([
                (f(a), Ek), (-VAR[c], cols.eh(c + a, order)), (VAR[b], cols.eh(a + b, order))])))
        for p in PERMS:
            a, b, c = p
            k2 = Q(2, dp)
            out.append(evaluate(ctx, f"C.{tag}EHam-alphab-c.{p}", "R", _combo([
                (f(a + a).scale(k2), cols.eh(b + c, order)), (f(a + b).scale(k2), cols.eh(c + a, order)), (f(a + c).scale(k2), cols.eh(a + b, order)),
                (-VAR[c], al(b)), (VAR[b], al(c))])))
        out.append(evaluate(ctx, f"C.{tag}E2-alphas", "R", _combo([
            (dl().scale(Q(-2, dp ** 3)), Ek), (f("x"), al("x")), (f("y"), al("y")), (f("z"), al("z"))])))

    E3 = c3["E3"]
    h3 = Q(3, dp)
    oblc = [
        (dl("x"), ("xx", "xy", "xz"), [(-Z, "zy"), (Y, "zz")]),
        (dl("y"), ("xy", "yy", "yz"), [(Z, "zx"), (-X, "zz")]),
        (dl("z"), ("xz", "yz", "zz"), [(-Y, "zx"), (X, "zy")]),
    ]
    for i, (dv, hs, zs) in enumerate(oblc, 1):
        terms = [(dv.scale(Q(-2, dpp)), E3)]
        terms += [(f(h).scale(h3), c3["Ea" + v]) for h, v in zip(hs, "xyz")]
        terms += [(coef, c3[name]) for coef, name in zs]
        out.append(evaluate(ctx, f"C.OBLC-M1(3).{i}", "R", _combo(terms)))

    # Rel-Ealphas, multiplied through by z^2
    zz = Z * Z
    lhs = [(zz * f(h).scale(Q(3, dp)), c3["Ea" + v]) for h, v in zip(("xx", "xy", "xz"), "xyz")]
    rhs = [
        ((Z * f("x")).scale(3), c3["Eaz"]),
        ((Z * D("y", "z") - Y * D("z", "z")).scale(Q(6, dp ** 2)), c3["E2Hxy"]),
        ((f("x") * D("z", "z")).scale(Q(-6, dp ** 2)), E3),
    ]
    out.append(evaluate(ctx, "C.Rel-Ealphas", "R", _combo(lhs + [(-c if isinstance(c, Polynomial) else -Q(c), v) for c, v in rhs])))

    eh2 = euler_shift(hamiltonian_power_top(ctx, "xy", 2), 2)
    out.append(evaluate(ctx, "C.EH2xy-equiv", "R", _combo([(Q(1), eh2), (-Z, c3["Eaz"]), (D("z", "z").scale(Q(1, dp ** 2)), E3)])))

    out.append(evaluate(ctx, "C.LCM1(3)", "R", _combo([
        (f("x"), c3["zx"]), (f("y"), c3["zy"]), (f("z"), c3["zz"]),
        (dl("x").scale(Q(-2, dpp)), c3["E2Hyz"]), (dl("y").scale(Q(-2, dpp)), c3["E2Hzx"]), (dl("z").scale(Q(-2, dpp)), c3["E2Hxy"])])))

    out.append(evaluate(ctx, "C.complexM0M1(2)", "R", g.M0_2 @ g.M1_2))
    out.append(evaluate(ctx, "C.complexM0M1(3)", "R", g.M0_3 @ g.M1_3))
    k2 = Q(-2, dp)
    out.append(evaluate(ctx, "C.sixthcolumn", "R", _combo([
        (Y, c2["ax"]), (-X, c2["ay"]), (f("xz").scale(k2), c2["EHyz"]), (f("yz").scale(k2), c2["EHzx"]), (f("zz").scale(k2), c2["EHxy"])])))
    return out


# suite D: matrix identities over R

def run_appendix_D(g: GlossaryTable) -> List[IdentityCheck]:
    ctx = g.ctx
    d = ctx.d
    dp = d - 1
    I3 = PolyMatrix.identity(3)
    out: List[IdentityCheck] = []

    def chk(id: str, build: Callable[[], PolyMatrix], arena: str = "R", informational: bool = False, note: str = "") -> None:
        out.append(evaluate_matrix(ctx, id, arena, build, informational, note))

    chk("D.c:q-d-D-sigma-interp.1", lambda: g.d1 - g.d3.T)
    chk("D.c:q-d-D-sigma-interp.2", lambda: g.d2.T + g.d2)
    chk("D.c:q-d-D-sigma-interp.3", lambda: g.D1 - g.D3.T)
    chk("D.c:q-d-D-sigma-interp.4", lambda: g.D2.T + g.D2)
    chk("D.c:q-d-D-sigma-interp.5", lambda: g.sigma1 - g.sigma3.T)
    chk("D.c:q-d-D-sigma-interp.6", lambda: g.sigma2.T + g.sigma2)

    # the product is 1x1 (d*f over Q), not the printed 3x3
    chk("D.c:basic-Eul.1", lambda: g.d1 @ g.D3)
    chk("D.c:basic-Eul.1.Qprobe", lambda: g.d1 @ g.D3, "Q", True, "equals d*f over Q")
    chk("D.c:basic-Eul.2", lambda: g.d3 @ g.D1 - g.D2 @ g.d2)
    alphas = [g.alpha0, g.alpha1, g.alpha2, g.alpha3]
    ds = [None, g.d1, g.d2, g.d3]
    Ds = [None, g.D1, g.D2, g.D3]
    for i in (1, 2, 3):
        chk(f"D.c:basic-Eul.3.{i}", lambda i=i: ds[i] @ alphas[i] - alphas[i - 1] @ Ds[i])

    s3 = ctx.delta.scale(Q(1, dp ** 3))
    chk("D.c:identity-Del-adjDel.1", lambda: g.alpha1 @ g.alpha2 - I3.scale_poly(s3))
    chk("D.c:identity-Del-adjDel.2", lambda: g.alpha2 @ g.alpha1 - I3.scale_poly(s3))

    # printed alpha_0 d_1 is 1x3 against a 3x3 right side; the checked reading
    # (1/3) sigma_3 d_1 is the one consistent with c:d-sigmas-1
    rhs = lambda: g.alpha1 @ g.alpha2 + (g.d2 @ g.sigma2).scale(Q(1, 3))
    chk("D.c:identity-RS-4-2-1.1", lambda: (g.sigma3 @ g.d1).scale(Q(1, 3)) - rhs())
    chk("D.c:identity-RS-4-2-1.1.printed", lambda: g.alpha0 @ g.d1 - rhs(), "R", True, "printed alpha_0 d_1 is 1x3")
    chk("D.c:identity-RS-4-2-1.2", lambda: g.q @ g.sigma3 - (g.alpha2 @ g.D3).scale(3))

    chk("D.c:d-D-alpha-q.1", lambda: g.q - g.d3 @ g.d1)
    chk("D.c:d-D-alpha-q.2", lambda: g.alpha1 @ g.q - g.d2 @ g.D2)
    chk("D.c:d-D-alpha-q.3", lambda: g.alpha1 @ g.q - g.D3 @ g.d1)
    chk("D.c:d-D-alpha-q.4", lambda: g.q @ g.d2)

    chk("D.c:d-sigmas-1", lambda: g.sigma3 @ g.d1 - g.d2 @ g.sigma2 - I3.scale_poly(ctx.delta.scale(Q(3, dp ** 3))))
    chk("D.c:D-to-sigmas.1", lambda: g.D2 @ g.sigma3 + g.sigma2 @ g.D3)
    chk("D.c:D-to-sigmas.2", lambda: g.D1 @ g.sigma2 + g.sigma1 @ g.D2)
    return out


# suites E/F: lemmas behind the theta(3) squares

def V_vectors(ctx: RingContext) -> PolyMatrix:
    """[V_x V_y V_z] as listed before d1CV (9x3)."""
    s = _Sym(ctx)
    d, k, H, D, dl = s.d, s.k, s.H, s.D, s.dl
    x, y, z = X, Y, Z
    half = Q(1, 2)
    c = Q(3, (d - 1) * (d - 2))
    top = Q(1, (d - 1) ** 2)
    Ax = [
        H("yz", D("x", "x")), H("zx", D("x", "x")), H("xy", D("x", "x")),
        H("zx", D("x", "y")) + (y * dl("z")).scale(k),
        (H("zx", D("x", "z")) + H("xy", D("x", "y")) + (z * dl("z") - y * dl("y")).scale(k)).scale(half),
        H("xy", D("x", "z")) - (z * dl("y")).scale(k),
    ]
    Ay = [
        H("yz", D("x", "y")) - (x * dl("z")).scale(k),
        H("yz", D("y", "y")),
        (H("yz", D("y", "z")) + H("xy", D("x", "y")) + (x * dl("x") - z * dl("z")).scale(k)).scale(half),
        H("zx", D("y", "y")), H("xy", D("y", "y")),
        H("xy", D("y", "z")) + (z * dl("x")).scale(k),
    ]
    Az = [
        H("yz", D("x", "z")) + (x * dl("y")).scale(k),
        (H("yz", D("y", "z")) + H("zx", D("x", "z")) + (y * dl("y") - x * dl("x")).scale(k)).scale(half),
        H("yz", D("z", "z")),
        H("zx", D("y", "z")) - (y * dl("x")).scale(k),
        H("zx", D("z", "z")), H("xy", D("z", "z")),
    ]
    Vx = [ZERO, dl("z").scale(top), -dl("y").scale(top)] + [e.scale(c) for e in Ax]
    Vy = [-dl("z").scale(top), ZERO, dl("x").scale(top)] + [e.scale(c) for e in Ay]
    Vz = [dl("y").scale(top), -dl("x").scale(top), ZERO] + [e.scale(c) for e in Az]
    return PolyMatrix.from_columns([Vx, Vy, Vz])


def delta_hamiltonian_matrix(ctx: RingContext) -> PolyMatrix:
    """Right side shared by theta0(3)-all-zetas and d1CV."""
    s = _Sym(ctx)
    fx, fy, fz = ctx.grad
    dx, dy, dz = ctx.delta_grad
    dl = s.dl()
    M = PolyMatrix([
        [dz * fy - dy * fz, dx * fz - dz * fx, dy * fx - dx * fy],
        [ZERO, (dl * fz).scale(3), (dl * fy).scale(-3)],
        [(dl * fz).scale(-3), ZERO, (dl * fx).scale(3)],
        [(dl * fy).scale(3), (dl * fx).scale(-3), ZERO],
    ])
    return M.scale(Q(1, (ctx.d - 1) ** 2))


def run_appendix_EF(ctx: RingContext, g: Optional[GlossaryTable] = None) -> List[IdentityCheck]:
    from .resolution import cone_differentials, square_residuals_order3

    g = g or build_glossary(ctx)
    d = ctx.d
    dp = d - 1
    cols = _Columns(g)
    th = g.theta0_3
    out: List[IdentityCheck] = []
    for name in ("E3", "E2Hyz", "E2Hzx", "E2Hxy"):
        out.append(evaluate(ctx, f"E.E2Hvanish.{name}", "R", th @ PolyMatrix.column(cols.c3[name])))
    dl = ctx.delta
    for v in "xyz":
        target = PolyMatrix.column([dl.scale(d - 2), X * dl, Y * dl, Z * dl]).scale_poly(VAR[v].scale(Q(-1, dp ** 2)))
        out.append(evaluate(ctx, f"E.theta0(3)Ealphas.{v}", "R", th @ PolyMatrix.column(cols.c3["Ea" + v]) - target))
    zetas = PolyMatrix.from_columns([cols.c3["zx"], cols.c3["zy"], cols.c3["zz"]])
    rhs = delta_hamiltonian_matrix(ctx)
    out.append(evaluate(ctx, "E.theta0(3)-all-zetas", "R", th @ zetas - rhs))

    V = V_vectors(ctx)
    C = cone_differentials(g)
    out.append(evaluate(ctx, "E.d1CV", "R", C[1] @ V - rhs))
    A = V.submatrix(3, 9, 0, 3)
    for j, v in enumerate("xyz"):
        out.append(evaluate(ctx, f"E.A{v}-in-ker-theta0(2)", "R", g.theta0_2 @ A.select_columns([j])))
    # V_* are, up to sign, the last three columns of theta_1(3)
    out.append(evaluate(ctx, "E.V-is-theta1(3)", "Q", g.theta1_3.select_columns([7, 8, 9]) + V, True))

    for name, res in square_residuals_order3(g):
        out.append(IdentityCheck(name, "R", res, "pass" if res.is_zero() else "fail"))
    out.extend(_appendix_F_blocks(ctx, g))
    return out


def _appendix_F_blocks(ctx: RingContext, g: GlossaryTable) -> List[IdentityCheck]:
    """Block forms of -theta_1(3)M_1(3) and -theta_2(3)M_2(3); informational."""
    d = ctx.d
    dp = d - 1
    s = _Sym(ctx)
    f, dl = s.f, s.dl
    x, y, z = X, Y, Z
    Z0 = PolyMatrix.zeros
    Hd = [s.H(p, dl()) for p in ("yz", "zx", "xy")]
    V3 = [x, y, z]
    out: List[IdentityCheck] = []

    K_printed = PolyMatrix([
        [f("z") * f("xy") - f("y") * f("xz"), f("z") * f("yy") - f("y") * f("yz"), f("z") * f("yz") - f("y") * f("zz")],
        [f("x") * f("xz") - f("z") * f("xx"), f("x") * f("yz") - f("z") * f("xy"), f("x") * f("zz") - f("z") * f("xz")],
        [f("y") * f("xx") - f("x") * f("xy"), f("y") * f("xy") - f("x") * f("yy"), f("y") * f("xz") - f("x") * f("yz")],
    ])
    # the explicit K of the second square is the transpose of K = Delta D_2 of the third
    K = g.Delta @ g.D2
    out.append(evaluate(ctx, "F.K-printed-is-transpose-of-Delta-D2", "Q", K.T - K_printed, True))
    tau = PolyMatrix([[dl(a) * v for v in V3] for a in "xyz"])
    Lam = PolyMatrix.identity(3).scale_poly(dl().scale(Q(9, 2 * dp))) - tau.T.scale(Q(1, dp ** 2))
    W = PolyMatrix.column([
        Hd[0], Hd[1], Hd[2],
        (x * Hd[0]).scale(Q(6, d - 2)),
        (x * Hd[1] + y * Hd[0]).scale(Q(3, d - 2)),
        (x * Hd[2] + z * Hd[0]).scale(Q(3, d - 2)),
        (y * Hd[1]).scale(Q(6, d - 2)),
        (y * Hd[2] + z * Hd[1]).scale(Q(3, d - 2)),
        (z * Hd[2]).scale(Q(6, d - 2)),
    ]).scale(Q(1, dp ** 2))
    cof = PolyMatrix.column([ctx.cofactor(*ab) for ab in ("xx", "xy", "xz", "yy", "yz", "zz")])
    lin = PolyMatrix([[2 * x, ZERO, ZERO], [y, x, ZERO], [z, ZERO, x], [ZERO, 2 * y, ZERO], [ZERO, z, y], [ZERO, ZERO, 2 * z]])
    quad = PolyMatrix.column([2 * x * x, 2 * x * y, 2 * x * z, 2 * y * y, 2 * y * z, 2 * z * z])
    dgrad = PolyMatrix.row([dl("x"), dl("y"), dl("z")])
    lhs = -(g.theta1_3 @ g.M1_3)
    for tag, lin_term, note in (
        ("", lin.scale(Q(9, dp ** 2)), "printed block form; H(delta) read as H_yz(delta)"),
        (".Pi-with-delta", lin.scale_poly(dl().scale(Q(9, dp ** 2))), "linear term of Pi multiplied by delta"),
    ):
        Pi = (cof @ g.D1).scale(Q(-9, dp)) + lin_term - (quad @ dgrad).scale(Q(3, dp ** 2 * (d - 2)))
        second = block([[Z0(3, 3), K_printed.scale(Q(d + 1, 2)), Lam, W.submatrix(0, 3, 0, 1)], [Z0(6, 3), Z0(6, 3), Pi, W.submatrix(3, 9, 0, 1)]])
        out.append(evaluate(ctx, "F.second-lift-blocks" + tag, "R", lhs - second, True, note))

    P = g.D3 @ g.d1
    r0 = PolyMatrix.row([ZERO] * 4 + [(v * dl()).scale(Q(d - 2, dp ** 2)) for v in V3] + [h.scale(Q(1, dp ** 2)) for h in Hd])
    r1 = block([[Z0(3, 1), P.scale(Q(d * d - 1, 4)), K.scale(Q(d + 1, 2)),
                 PolyMatrix.identity(3).scale_poly(dl().scale(Q(3 * (d + 1), 2 * dp ** 2))) + tau.scale(Q(1, dp ** 2))]])
    r2 = PolyMatrix.row([ZERO] * 4 + [(v * dl()).scale(Q(3, dp ** 2)) for v in V3] + [h.scale(Q(3, dp ** 2 * (d - 2))) for h in Hd])
    r3 = block([[Z0(3, 7), tau.scale(Q(3, dp ** 2 * (d - 2)))]])
    r4 = block([[Z0(3, 4), P.scale(Q(-3 * dp, 2)), K.scale(Q(-9, 2))]])
    third = block([[r0], [r1], [r2], [r3], [r4]])
    out.append(evaluate(ctx, "F.third-lift-blocks", "R", -(g.theta_even_3 @ g.M2_3) - third, True, "printed block form with P read as D_3 d_1"))
    return out


# suites built on the glossary and the resolutions

def run_mf(g: GlossaryTable) -> List[IdentityCheck]:
    ctx = g.ctx
    out = []
    df = ctx.f.scale(ctx.d)
    for i in (1, 2, 3):
        rep = verify_matrix_factorization((g[f"M1_{i}"], g[f"M2_{i}"]), df)
        out.append(evaluate(ctx, f"mf.M({i}).M1M2", "Q", rep.ab_residual))
        out.append(evaluate(ctx, f"mf.M({i}).M2M1", "Q", rep.ba_residual))
    return out


def run_complexes(g: GlossaryTable) -> List[IdentityCheck]:
    from .resolution import build_G1, build_target

    ctx = g.ctx
    out = [
        evaluate(ctx, "complexes.J21*M0(2)", "R", g.J21 @ g.M0_2),
        evaluate(ctx, "complexes.M0(2)*M1(2)", "R", g.M0_2 @ g.M1_2),
        evaluate(ctx, "complexes.J32*M0(3)", "R", g.J32 @ g.M0_3),
        evaluate(ctx, "complexes.M0(3)*M1(3)", "R", g.M0_3 @ g.M1_3),
    ]
    cxs = [build_G1(ctx, g, verify=False)] + [build_target(ctx, t, g, verify=False) for t in ("D1", "D2", "D3", "S2", "S3")]
    for cx in cxs:
        for name, res in cx.junction_residuals():
            out.append(IdentityCheck(f"complexes.{cx.name}.{name}", "R", res, "pass" if res.is_zero() else "fail"))
    return out


def run_chainmaps(g: GlossaryTable) -> List[IdentityCheck]:
    from .resolution import square_residuals_order2, square_residuals_order3

    out = []
    for name, res in square_residuals_order2(g) + square_residuals_order3(g):
        out.append(IdentityCheck(f"chainmaps.{name}", "R", res, "pass" if res.is_zero() else "fail"))
    return out


def run_suites(ctx: RingContext, suites: Sequence[str], g: Optional[GlossaryTable] = None) -> Dict[str, List[IdentityCheck]]:
    """Run the requested suites in a fixed order."""
    names = list(SUITES) if "all" in suites else [s for s in SUITES if s in suites]
    unknown = set(suites) - set(SUITES) - {"all"}
    if unknown:
        raise ValueError(f"unknown suite(s): {', '.join(sorted(unknown))}")
    needs_table = any(n not in ("A", "B") for n in names)
    if needs_table and g is None:
        g = build_glossary(ctx)
    runners = {
        "A": lambda: run_appendix_A(ctx),
        "B": lambda: run_appendix_B(ctx),
        "C": lambda: run_appendix_C(ctx, g),
        "D": lambda: run_appendix_D(g),
        "EF": lambda: run_appendix_EF(ctx, g),
        "mf": lambda: run_mf(g),
        "complexes": lambda: run_complexes(g),
        "chainmaps": lambda: run_chainmaps(g),
    }
    return {n: runners[n]() for n in names}


def counted(checks: Sequence[IdentityCheck]) -> List[IdentityCheck]:
    return [c for c in checks if not c.informational]


def all_pass(checks: Sequence[IdentityCheck]) -> bool:
    return all(c.passed for c in counted(checks))
