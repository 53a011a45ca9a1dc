"""Differential operators in divided-power normal form.

A DiffOp is a finite sum  p_abc * dx^(a) dy^(b) dz^(c)  with polynomial
coefficients written on the left.  Vector views list coordinates order by
order (1, 2, 3) in graded lex, then the constant slot last.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations_with_replacement
from math import comb
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .errors import OrderTooHigh
from .matrix import PolyMatrix
from .poly import ONE, ZERO, Monomial, Polynomial, X, Y, Z, grlex_key, partial_multi
from .ring import RingContext, divide_by_variable_mod_f, normal_form

VARS = (X, Y, Z)


def basis_of_order(k: int) -> List[Monomial]:
    """Divided-power multi-indices of exact order k, graded lex descending."""
    out = [(a, b, k - a - b) for a in range(k, -1, -1) for b in range(k - a, -1, -1)]
    return out


BASIS = {k: basis_of_order(k) for k in range(0, 4)}
PAIR_INDEX = {"xx": (2, 0, 0), "xy": (1, 1, 0), "xz": (1, 0, 1), "yy": (0, 2, 0), "yz": (0, 1, 1), "zz": (0, 0, 2)}


def full_basis(i: int) -> List[Monomial]:
    """Coordinates of the ambient module of D^i: orders 1..i, then constant."""
    out: List[Monomial] = []
    for k in range(1, i + 1):
        out.extend(BASIS[k])
    out.append((0, 0, 0))
    return out


def index_label(idx: Monomial) -> str:
    return "".join(v * e for v, e in zip("xyz", idx)) or "1"


class DiffOp:
    """Immutable operator; coefficients are kept over Q."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Optional[Dict[Monomial, Polynomial]] = None):
        self.coeffs: Dict[Monomial, Polynomial] = {tuple(k): v for k, v in (coeffs or {}).items() if v}

    @classmethod
    def multiplication(cls, p: Polynomial) -> DiffOp:
        return cls({(0, 0, 0): p})

    @classmethod
    def partial_op(cls, idx: Monomial) -> DiffOp:
        return cls({tuple(idx): ONE})

    @classmethod
    def from_vector(cls, coords: Sequence[Polynomial], basis: Sequence[Monomial]) -> DiffOp:
        return cls(dict(zip(basis, coords)))

    @property
    def order(self) -> int:
        return max((sum(k) for k in self.coeffs), default=-1)

    def coefficient(self, idx: Monomial) -> Polynomial:
        return self.coeffs.get(tuple(idx), ZERO)

    def block(self, k: int) -> List[Polynomial]:
        return [self.coefficient(idx) for idx in BASIS[k]]

    def vector(self, i: int) -> List[Polynomial]:
        if self.order > i:
            raise OrderTooHigh(f"operator of order {self.order} does not fit in order {i}")
        return [self.coefficient(idx) for idx in full_basis(i)]

    def top(self) -> DiffOp:
        """Naive lift: keep only the top-order part."""
        k = self.order
        return DiffOp({idx: p for idx, p in self.coeffs.items() if sum(idx) == k})

    def truncate(self, k: int) -> DiffOp:
        """Part of order exactly k."""
        return DiffOp({idx: p for idx, p in self.coeffs.items() if sum(idx) == k})

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other) -> bool:
        if not isinstance(other, DiffOp):
            return NotImplemented
        return self.coeffs == other.coeffs

    __hash__ = None  # type: ignore[assignment]

    def __add__(self, other: DiffOp) -> DiffOp:
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, ZERO) + v
        return DiffOp(out)

    def __neg__(self) -> DiffOp:
        return DiffOp({k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other: DiffOp) -> DiffOp:
        return self + (-other)

    def scale(self, c) -> DiffOp:
        """Left multiplication by a scalar or polynomial."""
        if isinstance(c, Polynomial):
            return DiffOp({k: c * v for k, v in self.coeffs.items()})
        c = Fraction(c)
        return DiffOp({k: v.scale(c) for k, v in self.coeffs.items()})

    def __rmul__(self, c) -> DiffOp:
        return self.scale(c)

    def __mul__(self, other):
        if isinstance(other, DiffOp):
            return compose(self, other)
        return self.scale(other)

    def map_coeffs(self, fn) -> DiffOp:
        return DiffOp({k: fn(v) for k, v in self.coeffs.items()})

    def reduce(self, ctx: RingContext) -> DiffOp:
        return self.map_coeffs(lambda p: normal_form(p, ctx))

    def __call__(self, g: Polynomial) -> Polynomial:
        return apply(self, g)

    def __repr__(self) -> str:
        return f"DiffOp({render_op(self)!r})"

    def to_json(self) -> list:
        from .parser import render_poly

        return [
            {"coeff": render_poly(p), "dx": k[0], "dy": k[1], "dz": k[2]}
            for k, p in sorted(self.coeffs.items(), key=lambda t: grlex_key(t[0]), reverse=True)
        ]


class OperatorVector:
    """Coordinates of an operator.

    kind "full" uses the ambient basis of D^i (orders 1..i, then the
    constant), "block" a single order block, and "residual" the rows of P_i
    (one per variable multiset of size < i).
    """

    _LENGTHS = {"full": lambda i: len(full_basis(i)), "block": lambda i: len(BASIS[i]), "residual": lambda i: (i + 1) * (i + 2) * i // 6}

    def __init__(self, order: int, coords: Sequence[Polynomial], kind: str = "full"):
        expected = self._LENGTHS[kind](order)
        if len(coords) != expected:
            raise ValueError(f"expected {expected} coordinates, got {len(coords)}")
        self.order = order
        self.kind = kind
        self.coords = list(coords)

    def is_zero(self) -> bool:
        return all(not c for c in self.coords)

    def to_json(self) -> dict:
        from .parser import render_poly

        return {"order": self.order, "kind": self.kind, "coords": [render_poly(c) for c in self.coords]}


def apply(op: DiffOp, g: Polynomial) -> Polynomial:
    total = ZERO
    for idx, p in op.coeffs.items():
        dg = partial_multi(g, idx)
        if dg:
            total = total + p * dg
    return total


def _sub(a: Monomial, b: Monomial) -> Monomial:
    return (a[0] - b[0], a[1] - b[1], a[2] - b[2])


def _below(a: Monomial) -> Iterable[Monomial]:
    for i in range(a[0] + 1):
        for j in range(a[1] + 1):
            for k in range(a[2] + 1):
                yield (i, j, k)


def compose(a: DiffOp, b: DiffOp) -> DiffOp:
    """a o b via  d^(al) o q = sum_g d^(al-g)(q) d^(g)  and  d^(g) d^(be) = C(g+be, g) d^(g+be)."""
    out: Dict[Monomial, Polynomial] = {}
    for al, p in a.coeffs.items():
        for be, q in b.coeffs.items():
            for g in _below(al):
                dq = partial_multi(q, _sub(al, g))
                if not dq:
                    continue
                tgt = (g[0] + be[0], g[1] + be[1], g[2] + be[2])
                c = comb(tgt[0], g[0]) * comb(tgt[1], g[1]) * comb(tgt[2], g[2])
                term = p * dq.scale(c) if c != 1 else p * dq
                prev = out.get(tgt)
                out[tgt] = term if prev is None else prev + term
    return DiffOp(out)


def bracket(op: DiffOp, g: Polynomial) -> DiffOp:
    m = DiffOp.multiplication(g)
    return compose(op, m) - compose(m, op)


def bracket_chain(op: DiffOp, gs: Sequence[Polynomial]) -> DiffOp:
    for g in gs:
        op = bracket(op, g)
    return op


def stabilizes_ideal(op: DiffOp, ctx: RingContext, order: Optional[int] = None) -> bool:
    """Bracket criterion: [op, g](f) lies in (f) for all variable tuples g of length < order."""
    i = op.order if order is None else order
    for length in range(max(i, 1)):
        for tup in combinations_with_replacement(range(3), length):
            b = bracket_chain(op, [VARS[t] for t in tup])
            if normal_form(apply(b, ctx.f), ctx):
                return False
    return True


def membership_residual(op: DiffOp, ctx: RingContext, order: int, P: Optional[PolyMatrix] = None) -> OperatorVector:
    """P_i times the coordinate vector of op, reduced mod f."""
    if order not in (1, 2, 3):
        raise ValueError("order must be 1, 2 or 3")
    if op.order > order:
        raise OrderTooHigh(f"operator of order {op.order} exceeds {order}")
    if P is None:
        from .glossary import P_matrix

        P = P_matrix(ctx, order)
    v = PolyMatrix.column(op.vector(order))
    res = (P @ v).col(0)
    return OperatorVector(order, [normal_form(r, ctx) for r in res], kind="residual")


def is_member(op: DiffOp, ctx: RingContext, order: int) -> bool:
    return membership_residual(op, ctx, order).is_zero()


# named operators

def euler() -> DiffOp:
    return DiffOp({(1, 0, 0): X, (0, 1, 0): Y, (0, 0, 1): Z})


def hamiltonian(ctx: RingContext, pair: str) -> DiffOp:
    """H_bc = f_c d_b - f_b d_c."""
    b, c = ("xyz".index(pair[0]), "xyz".index(pair[1]))
    eb = tuple(1 if k == b else 0 for k in range(3))
    ec = tuple(1 if k == c else 0 for k in range(3))
    return DiffOp({eb: ctx.grad[c], ec: -ctx.grad[b]})


def d_operator(ctx: RingContext, var: str) -> DiffOp:
    """D_a = Delta_ax dx + Delta_ay dy + Delta_az dz."""
    a = "xyz".index(var)
    return DiffOp({(1, 0, 0): ctx.cofactor(a, 0), (0, 1, 0): ctx.cofactor(a, 1), (0, 0, 1): ctx.cofactor(a, 2)})


HAM_FOR = {"x": "yz", "y": "zx", "z": "xy"}


def divide_op_by_variable(op: DiffOp, var: str, ctx: RingContext) -> DiffOp:
    return DiffOp({k: divide_by_variable_mod_f(p, var, ctx) for k, p in op.coeffs.items()})


class GeneratorSet:
    """Named generators G_0..G_3 in their canonical order."""

    def __init__(self, groups: Dict[str, List[Tuple[str, DiffOp]]]):
        self.groups = groups

    def upto(self, order: int) -> List[Tuple[str, DiffOp]]:
        out = []
        for k in range(order + 1):
            out.extend(self.groups.get(f"G{k}", []))
        return out

    def named(self) -> Dict[str, DiffOp]:
        return {n: op for g in self.groups.values() for n, op in g}

    def __getitem__(self, name: str) -> DiffOp:
        return self.named()[name]


def build_A(ctx: RingContext, var: str, E2: Optional[DiffOp] = None) -> DiffOp:
    d = ctx.d
    H = hamiltonian(ctx, HAM_FOR[var])
    E = euler()
    E2 = E2 if E2 is not None else compose(E, E)
    Daa = ctx.cofactor(var, var)
    c = Fraction(1, (d - 1) ** 2)
    num = compose(H, H) + E2.scale(Daa.scale(c)) + E.scale(Daa.scale(c * (d - 2)))
    return divide_op_by_variable(num, var, ctx)


def build_Z(ctx: RingContext, var: str, cache: Optional[Dict[str, DiffOp]] = None) -> DiffOp:
    d = ctx.d
    pair = HAM_FOR[var]
    H = hamiltonian(ctx, pair)
    E = euler()
    c = cache or {}
    E2 = c.get("E^2") or compose(E, E)
    E3 = c.get("E^3") or compose(E, E2)
    EH = c.get("EH_" + pair) or compose(E, H)
    E2H = c.get("E^2H_" + pair) or compose(E, EH)
    H3 = compose(H, compose(H, H))
    Daa = ctx.cofactor(var, var)
    HD = ctx.ham(pair, Daa)
    k = Fraction(1, 2 * (d - 1) ** 2 * (d - 2))
    inner = (
        E2H.scale(Daa.scale(6 * (d - 2)))
        - E3.scale(HD.scale(2))
        - EH.scale(Daa.scale(6 * (d - 2)))
        - E2.scale(HD.scale(3 * (d - 3)))
        - H.scale(Daa.scale(2 * (d - 1) * (d - 2) * (d - 3)))
        + E.scale(HD.scale(3 * d - 7))
    )
    num = H3 + inner.scale(k)
    once = divide_op_by_variable(num, var, ctx)
    return divide_op_by_variable(once, var, ctx)


def build_generators(ctx: RingContext, order: int = 3, verify: bool = True) -> GeneratorSet:
    E = euler()
    hams = [(f"H_{p}", hamiltonian(ctx, p)) for p in ("yz", "zx", "xy")]
    groups: Dict[str, List[Tuple[str, DiffOp]]] = {
        "G0": [("1", DiffOp.multiplication(ONE))],
        "G1": [("E", E)] + hams,
    }
    cache: Dict[str, DiffOp] = {}
    if order >= 2:
        E2 = compose(E, E)
        cache["E^2"] = E2
        g2 = [("E^2", E2)]
        for n, H in hams:
            EH = compose(E, H)
            cache["E" + n] = EH
            g2.append(("E" + n, EH))
        for v in "xyz":
            g2.append((f"A_{v}", build_A(ctx, v, E2)))
        groups["G2"] = g2
    if order >= 3:
        E3 = compose(E, cache["E^2"])
        cache["E^3"] = E3
        g3 = [("E^3", E3)]
        for n, _ in hams:
            E2H = compose(E, cache["E" + n])
            cache["E^2" + n] = E2H
            g3.append(("E^2" + n, E2H))
        named2 = dict(groups["G2"])
        for v in "xyz":
            g3.append((f"EA_{v}", compose(E, named2[f"A_{v}"])))
        for v in "xyz":
            g3.append((f"Z_{v}", build_Z(ctx, v, cache)))
        groups["G3"] = g3
    gens = GeneratorSet(groups)
    if verify:
        from .errors import MathCheckError

        for name, op in gens.upto(order):
            k = max(op.order, 1)
            if not stabilizes_ideal(op, ctx, k) or not is_member(op, ctx, k):
                raise MathCheckError(f"generator {name} failed membership verification")
    return gens


def verify_generator(op: DiffOp, ctx: RingContext) -> Dict[str, bool]:
    k = max(op.order, 1)
    return {"bracket": stabilizes_ideal(op, ctx, k), "residual": is_member(op, ctx, k)}


def lifting_residuals(ctx: RingContext) -> Dict[str, DiffOp]:
    """Composite minus (naive top-order lift + stated lower-order part), reduced mod f.

    Every value is zero when the lifting identities hold; keys name the
    identity, e.g. "E^2" for  E o E = top(E o E) + E.
    """
    d = ctx.d
    E = euler()
    E2 = compose(E, E)
    E3 = compose(E, E2)
    out = {
        "E^2": E2 - (E2.top() + E),
        "E^3": E3 - (E3.top() + E2.scale(3) - E.scale(2)),
    }
    for var, pair in HAM_FOR.items():
        a = "xyz".index(var)
        H = hamiltonian(ctx, pair)
        EH = compose(E, H)
        E2H = compose(E, EH)
        H2 = compose(H, H)
        Dv = d_operator(ctx, var)
        dxx = ctx.cofactor(a, a)
        low = compose(DiffOp.multiplication(VARS[a]), Dv) - compose(DiffOp.multiplication(dxx), E)
        out["EH_" + pair] = EH - (EH.top() + H.scale(d - 1))
        out["H^2_" + pair] = H2 - (H2.top() + low.scale(Fraction(1, d - 1)))
        out["E^2H_" + pair] = E2H - (E2H.top() + EH.scale(2 * d - 1) - H.scale(d * (d - 1)))
    return {k: v.reduce(ctx) for k, v in out.items()}


# rendering

def render_op(op: DiffOp) -> str:
    from .parser import render_poly

    if op.is_zero():
        return "0"
    parts = []
    for idx, p in sorted(op.coeffs.items(), key=lambda t: grlex_key(t[0]), reverse=True):
        d = "*".join(
            (f"d{v}" if e == 1 else f"d{v}^({e})") for v, e in zip("xyz", idx) if e
        )
        neg = False
        if len(p) == 1:
            (m, c), = p.terms.items()
            neg = c < 0
            coeff = render_poly(-p if neg else p)
        else:
            coeff = f"({render_poly(p)})"
        if not d:
            body = coeff
        elif coeff == "1":
            body = d
        else:
            body = f"{coeff}*{d}"
        if not parts:
            parts.append(f"-{body}" if neg else body)
        else:
            parts.append(f" - {body}" if neg else f" + {body}")
    return "".join(parts)
