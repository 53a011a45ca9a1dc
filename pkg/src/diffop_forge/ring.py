"""Derived data of f and the quotient ring services for R = Q[x,y,z]/(f)."""

from __future__ import annotations

from itertools import combinations
from typing import Dict, List, Tuple

from .errors import DegenerateForm, DegreeTooSmall, MathCheckError, NotDivisibleModF, NotHomogeneous, NotIsolated
from .matrix import PolyMatrix
from .poly import (
    NEG_INF,
    Polynomial,
    X,
    Y,
    Z,
    divide_with_remainder,
    grlex_key,
    is_homogeneous,
    monomial_divides,
    var_index,
)

VARIABLES = (X, Y, Z)
PAIRS = ("xx", "xy", "xz", "yy", "yz", "zz")


def _d(p: Polynomial, i: int) -> Polynomial:
    # ordinary first partial by index
    return p.partial(i, 1)


class DivisionAudit:
    """Counts divide_by_variable_mod_f calls and their self-checks."""

    def __init__(self):
        self.calls = 0
        self.verified = 0

    def __repr__(self) -> str:
        return f"DivisionAudit(calls={self.calls}, verified={self.verified})"


class RingContext:
    """f together with partials, Hessian, cofactors, delta and its partials."""

    def __init__(self, f: Polynomial):
        deg = is_homogeneous(f)
        if deg is None:
            raise NotHomogeneous(f"f = {f} is not homogeneous")
        if deg == NEG_INF or deg < 3:
            raise DegreeTooSmall(f"f must have degree >= 3 (got {deg})")
        self.f = f
        self.d = int(deg)
        self.lm = f.leading_term()[0]
        self.audit = DivisionAudit()

        self.grad = tuple(_d(f, i) for i in range(3))
        self.fx, self.fy, self.fz = self.grad
        # ordinary second and third partials keyed by sorted index tuples
        self._second: Dict[Tuple[int, int], Polynomial] = {}
        self._third: Dict[Tuple[int, int, int], Polynomial] = {}
        for i in range(3):
            for j in range(i, 3):
                self._second[(i, j)] = _d(self.grad[i], j)
        for i in range(3):
            for j in range(i, 3):
                for k in range(j, 3):
                    self._third[(i, j, k)] = _d(self._second[(i, j)], k)
        self.hessian = PolyMatrix([[self.second(i, j) for j in range(3)] for i in range(3)])

        h = self.second
        cof = {
            (0, 0): h(1, 1) * h(2, 2) - h(1, 2) * h(1, 2),
            (1, 1): h(0, 0) * h(2, 2) - h(0, 2) * h(0, 2),
            (2, 2): h(0, 0) * h(1, 1) - h(0, 1) * h(0, 1),
            (0, 1): h(0, 2) * h(1, 2) - h(0, 1) * h(2, 2),
            (0, 2): h(0, 1) * h(1, 2) - h(0, 2) * h(1, 1),
            (1, 2): h(0, 1) * h(0, 2) - h(0, 0) * h(1, 2),
        }
        self._cof = cof
        self.Dxx, self.Dxy, self.Dxz = cof[(0, 0)], cof[(0, 1)], cof[(0, 2)]
        self.Dyy, self.Dyz, self.Dzz = cof[(1, 1)], cof[(1, 2)], cof[(2, 2)]
        self.adj = PolyMatrix([[self.cofactor(i, j) for j in range(3)] for i in range(3)])
        self.delta = h(0, 0) * self.Dxx + h(0, 1) * self.Dxy + h(0, 2) * self.Dxz
        self.delta_grad = tuple(_d(self.delta, i) for i in range(3))
        self.dx, self.dy, self.dz = self.delta_grad
        self._self_check()

    def _self_check(self) -> None:
        euler = X * self.fx + Y * self.fy + Z * self.fz
        if euler != self.f.scale(self.d):
            raise MathCheckError("Euler identity failed for f")
        prod = self.hessian @ self.adj
        if prod != PolyMatrix.identity(3).scale_poly(self.delta):
            raise MathCheckError("Hessian times adjugate is not delta * I")

    # accessors

    def second(self, i, j) -> Polynomial:
        i, j = sorted((var_index(i), var_index(j)))
        return self._second[(i, j)]

    def third(self, i, j, k) -> Polynomial:
        key = tuple(sorted((var_index(i), var_index(j), var_index(k))))
        return self._third[key]

    def cofactor(self, i, j) -> Polynomial:
        i, j = sorted((var_index(i), var_index(j)))
        return self._cof[(i, j)]

    def pd(self, name: str) -> Polynomial:
        """Partial of f by a string of variable names, e.g. pd('xxy')."""
        if name == "":
            return self.f
        idx = [var_index(c) for c in name]
        if len(idx) == 1:
            return self.grad[idx[0]]
        if len(idx) == 2:
            return self.second(*idx)
        if len(idx) == 3:
            return self.third(*idx)
        p = self.f
        for i in idx:
            p = _d(p, i)
        return p

    def ham(self, pair: str, g: Polynomial) -> Polynomial:
        """Hamiltonian derivation applied to g: H_yz, H_zx or H_xy."""
        b, c = (var_index(ch) for ch in pair)
        return self.grad[c] * _d(g, b) - self.grad[b] * _d(g, c)

    # quotient ring services

    def normal_form(self, p: Polynomial) -> Polynomial:
        return normal_form(p, self)

    def is_zero_mod_f(self, p: Polynomial) -> bool:
        return not normal_form(p, self)


def build_context(f: Polynomial) -> RingContext:
    return RingContext(f)


def normal_form(p: Polynomial, ctx: RingContext) -> Polynomial:
    if not p:
        return p
    lm = ctx.lm
    if all(not monomial_divides(lm, m) for m in p.terms):
        return p
    return divide_with_remainder(p, ctx.f)[1]


def divide_by_variable_mod_f(h: Polynomial, var, ctx: RingContext) -> Polynomial:
    """Return q with h - var*q in (f), self-checked on every call."""
    i = var_index(var)
    v = VARIABLES[i]
    ctx.audit.calls += 1
    q0_terms = {}
    r_terms = {}
    for m, c in h.terms.items():
        if m[i] > 0:
            n = list(m)
            n[i] -= 1
            q0_terms[tuple(n)] = c
        else:
            r_terms[m] = c
    q0 = Polynomial(q0_terms)
    r = Polynomial(r_terms)
    if r:
        g = ctx.f.substitute_zero(i)
        if not g:
            raise DegenerateForm(f"{'xyz'[i]} divides f")
        u = Polynomial({_lower(m, i): c for m, c in (ctx.f - g).terms.items()})
        t, rem = divide_with_remainder(r, g)
        if rem:
            raise NotDivisibleModF(f"{h} is not divisible by {'xyz'[i]} modulo f")
        q = normal_form(q0 - u * t, ctx)
    else:
        q = normal_form(q0, ctx)
    if normal_form(h - v * q, ctx):
        raise NotDivisibleModF(f"self-check failed dividing {h} by {'xyz'[i]}")
    ctx.audit.verified += 1
    return q


def _lower(m, i):
    n = list(m)
    n[i] -= 1
    return tuple(n)


class GroebnerBasis:
    def __init__(self, generators: List[Polynomial]):
        self.generators = sorted(generators, key=lambda g: grlex_key(g.leading_term()[0]), reverse=True)

    def leading_monomials(self):
        return [g.leading_term()[0] for g in self.generators]

    def pure_powers(self) -> Dict[str, int]:
        out = {}
        for m in self.leading_monomials():
            nz = [k for k in range(3) if m[k]]
            if len(nz) == 1:
                name = "xyz"[nz[0]]
                out[name] = min(out.get(name, m[nz[0]]), m[nz[0]])
        return out

    def is_zero_dimensional(self) -> bool:
        return len(self.pure_powers()) == 3

    def to_json(self):
        from .parser import render_poly

        return {"generators": [render_poly(g) for g in self.generators], "order": "grlex", "variables": ["x", "y", "z"]}


def _monic(p: Polynomial) -> Polynomial:
    return p.scale(1 / p.leading_term()[1])


def _reduce(p: Polynomial, basis: List[Polynomial]) -> Polynomial:
    """Full reduction of p by a list of monic polynomials."""
    lead = [(g.leading_term()[0], g) for g in basis]
    work = dict(p.terms)
    rem = {}
    while work:
        m = max(work, key=grlex_key)
        c = work[m]
        for lm, g in lead:
            if monomial_divides(lm, m):
                s = (m[0] - lm[0], m[1] - lm[1], m[2] - lm[2])
                for n, e in g.terms.items():
                    t = (n[0] + s[0], n[1] + s[1], n[2] + s[2])
                    val = work.get(t, 0) - c * e
                    if val:
                        work[t] = val
                    else:
                        work.pop(t, None)
                break
        else:
            rem[m] = work.pop(m)
    return Polynomial(rem)


def _lcm(a, b):
    return tuple(max(i, j) for i, j in zip(a, b))


def _spoly(f: Polynomial, g: Polynomial) -> Polynomial:
    mf, mg = f.leading_term()[0], g.leading_term()[0]
    l = _lcm(mf, mg)
    sf = Polynomial.monomial(tuple(a - b for a, b in zip(l, mf)))
    sg = Polynomial.monomial(tuple(a - b for a, b in zip(l, mg)))
    return sf * f - sg * g


def buchberger(polys: List[Polynomial]) -> GroebnerBasis:
    """Reduced Groebner basis under graded lex.

    Pairs are processed by smallest lcm first and pairs with coprime
    leading monomials are skipped.
    """
    basis = [_monic(p) for p in polys if p]
    pairs = [(i, j) for i, j in combinations(range(len(basis)), 2)]
    while pairs:
        pairs.sort(key=lambda ij: grlex_key(_lcm(basis[ij[0]].leading_term()[0], basis[ij[1]].leading_term()[0])))
        i, j = pairs.pop(0)
        mi, mj = basis[i].leading_term()[0], basis[j].leading_term()[0]
        if all(a == 0 or b == 0 for a, b in zip(mi, mj)):
            continue
        h = _reduce(_spoly(basis[i], basis[j]), basis)
        if h:
            basis.append(_monic(h))
            k = len(basis) - 1
            pairs.extend((a, k) for a in range(k))
    # minimalize, then interreduce
    basis.sort(key=lambda g: grlex_key(g.leading_term()[0]))
    minimal: List[Polynomial] = []
    for g in basis:
        lm = g.leading_term()[0]
        if any(monomial_divides(h.leading_term()[0], lm) for h in minimal):
            continue
        minimal = [h for h in minimal if not monomial_divides(lm, h.leading_term()[0])]
        minimal.append(g)
    reduced = []
    for k, g in enumerate(minimal):
        others = minimal[:k] + minimal[k + 1 :]
        lt = Polynomial.monomial(g.leading_term()[0])
        reduced.append(lt + _reduce(g - lt, others))
    return GroebnerBasis(reduced)


def validate_isolated_singularity(ctx: RingContext) -> GroebnerBasis:
    gb = buchberger(list(ctx.grad))
    if not gb.generators or not gb.is_zero_dimensional():
        missing = sorted(set("xyz") - set(gb.pure_powers()))
        raise NotIsolated(f"Jacobian ideal is not zero-dimensional: no pure power of {', '.join(missing)} among leading terms")
    return gb


def validated_context(f: Polynomial) -> Tuple[RingContext, GroebnerBasis]:
    ctx = build_context(f)
    return ctx, validate_isolated_singularity(ctx)

