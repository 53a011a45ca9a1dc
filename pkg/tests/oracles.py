"""Reference computations used by the tests, independent of the package
internals where that matters (sympy for polynomial arithmetic and division)."""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations_with_replacement

import sympy

from diffop_forge.poly import Polynomial
from diffop_forge.weyl import DiffOp, apply

SX, SY, SZ = sympy.symbols("x y z")
SYMS = (SX, SY, SZ)

FAMILY = [
    "x^3+y^3+z^3",
    "x^4+y^4+z^4",
    "x^5+y^5+z^5",
    "x^3+y^3+z^3+x*y*z",
    "x^3*y+y^3*z+z^3*x",
]


def to_sympy(p: Polynomial):
    expr = sympy.Integer(0)
    for (a, b, c), coeff in p.terms.items():
        expr += sympy.Rational(coeff.numerator, coeff.denominator) * SX**a * SY**b * SZ**c
    return sympy.expand(expr)


def from_sympy(expr) -> Polynomial:
    poly = sympy.Poly(sympy.expand(expr), *SYMS)
    return Polynomial({m: Fraction(int(c.p), int(c.q)) for m, c in poly.terms()})


def divisible(p: Polynomial, f: Polynomial) -> bool:
    if not p:
        return True
    _, r = sympy.div(sympy.Poly(to_sympy(p), *SYMS), sympy.Poly(to_sympy(f), *SYMS))
    return r.is_zero


def sympy_apply(op: DiffOp, g: Polynomial):
    """Apply an operator written in divided powers: d^(a) = d^a / a!."""
    s = to_sympy(g)
    total = sympy.Integer(0)
    for (a, b, c), p in op.coeffs.items():
        dg = s
        for sym, e in zip(SYMS, (a, b, c)):
            if e:
                dg = sympy.diff(dg, sym, e) / sympy.factorial(e)
        total += to_sympy(p) * dg
    return sympy.expand(total)


def monomials_below(k: int):
    """Exponent vectors of all monomials of degree < k."""
    out = []
    for deg in range(k):
        for tup in combinations_with_replacement(range(3), deg):
            out.append(tuple(tup.count(i) for i in range(3)))
    return out


def definition_member(op: DiffOp, f: Polynomial, order: int) -> bool:
    """op preserves (f) iff op(f*m) lies in (f) for every monomial m of degree < order."""
    for m in monomials_below(max(order, 1)):
        if not divisible(apply(op, f * Polynomial.monomial(m)), f):
            return False
    return True


def random_poly(rng: random.Random, max_degree: int, terms: int = 4, homogeneous_degree=None) -> Polynomial:
    out = {}
    for _ in range(terms):
        deg = homogeneous_degree if homogeneous_degree is not None else rng.randint(0, max_degree)
        a = rng.randint(0, deg)
        b = rng.randint(0, deg - a)
        out[(a, b, deg - a - b)] = Fraction(rng.randint(-9, 9), rng.choice((1, 1, 2, 3)))
    return Polynomial(out)


def random_op(rng: random.Random, order: int, coeff_degree: int, density: float = 0.5) -> DiffOp:
    coeffs = {}
    for k in range(order + 1):
        for idx in monomials_of_degree(k):
            if rng.random() < density or (k == order and not coeffs):
                coeffs[idx] = random_poly(rng, coeff_degree, terms=rng.randint(1, 3))
    return DiffOp(coeffs)


def monomials_of_degree(k: int):
    return [tuple(t.count(i) for i in range(3)) for t in combinations_with_replacement(range(3), k)]
