"""Sparse polynomials in x, y, z with exact rational coefficients.

Monomials are exponent triples (a, b, c) meaning x^a y^b z^c.  Terms are
kept in a dict with no zero coefficients, so equal polynomials compare
equal directly.  Ordered views use graded lex with x > y > z.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import Dict, Iterable, Iterator, Optional, Tuple, Union

from .errors import DivisionByZero, NotDivisible

Monomial = Tuple[int, int, int]
Scalar = Union[int, Fraction]

VARS = ("x", "y", "z")
_VAR_INDEX = {"x": 0, "y": 1, "z": 2}

# sentinel degree reported for the zero polynomial
NEG_INF = float("-inf")


def var_index(var) -> int:
    if isinstance(var, int):
        if var not in (0, 1, 2):
            raise ValueError(f"variable index out of range: {var}")
        return var
    try:
        return _VAR_INDEX[var]
    except KeyError:
        raise ValueError(f"unknown variable {var!r}") from None


def grlex_key(m: Monomial) -> Tuple[int, int, int, int]:
    return (m[0] + m[1] + m[2], m[0], m[1], m[2])


def monomial_divides(m: Monomial, n: Monomial) -> bool:
    return m[0] <= n[0] and m[1] <= n[1] and m[2] <= n[2]


class Polynomial:
    """Immutable sparse polynomial over Q."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Optional[Dict[Monomial, Scalar]] = None, _clean: bool = False):
        if terms is None:
            self._terms: Dict[Monomial, Fraction] = {}
        elif _clean:
            self._terms = terms  # type: ignore[assignment]
        else:
            clean = {}
            for m, c in terms.items():
                if c:
                    if len(m) != 3 or min(m) < 0:
                        raise ValueError(f"bad monomial {m!r}")
                    clean[tuple(m)] = Fraction(c)
            self._terms = clean
        self._hash = None

    # constructors

    @classmethod
    def const(cls, c: Scalar) -> Polynomial:
        return cls({(0, 0, 0): Fraction(c)}) if c else cls()

    @classmethod
    def var(cls, v) -> Polynomial:
        e = [0, 0, 0]
        e[var_index(v)] = 1
        return cls({tuple(e): Fraction(1)}, _clean=True)

    @classmethod
    def monomial(cls, exps: Monomial, coeff: Scalar = 1) -> Polynomial:
        return cls({tuple(exps): coeff})

    # views

    @property
    def terms(self) -> Dict[Monomial, Fraction]:
        return self._terms

    def sorted_terms(self) -> list:
        """Terms in graded lex order, highest first."""
        return sorted(self._terms.items(), key=lambda t: grlex_key(t[0]), reverse=True)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self) -> Iterator[Tuple[Monomial, Fraction]]:
        return iter(self.sorted_terms())

    def leading_term(self) -> Tuple[Monomial, Fraction]:
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        m = max(self._terms, key=grlex_key)
        return m, self._terms[m]

    def total_degree(self):
        if not self._terms:
            return NEG_INF
        return max(sum(m) for m in self._terms)

    def constant_term(self) -> Fraction:
        return self._terms.get((0, 0, 0), Fraction(0))

    def is_constant(self) -> bool:
        return all(m == (0, 0, 0) for m in self._terms)

    def coefficient(self, m: Monomial) -> Fraction:
        return self._terms.get(tuple(m), Fraction(0))

    # arithmetic

    def __add__(self, other) -> Polynomial:
        other = _coerce(other)
        if not other._terms:
            return self
        if not self._terms:
            return other
        out = dict(self._terms)
        for m, c in other._terms.items():
            s = out.get(m)
            if s is None:
                out[m] = c
            else:
                s += c
                if s:
                    out[m] = s
                else:
                    del out[m]
        return Polynomial(out, _clean=True)

    __radd__ = __add__

    def __neg__(self) -> Polynomial:
        return Polynomial({m: -c for m, c in self._terms.items()}, _clean=True)

    def __sub__(self, other) -> Polynomial:
        return self + (-_coerce(other))

    def __rsub__(self, other) -> Polynomial:
        return _coerce(other) - self

    def scale(self, c: Scalar) -> Polynomial:
        c = Fraction(c)
        if not c:
            return Polynomial()
        if c == 1:
            return self
        return Polynomial({m: v * c for m, v in self._terms.items()}, _clean=True)

    def __mul__(self, other) -> Polynomial:
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = _coerce(other)
        a, b = self._terms, other._terms
        if not a or not b:
            return Polynomial()
        if len(a) < len(b):
            a, b = b, a
        out: Dict[Monomial, Fraction] = {}
        get = out.get
        for (m0, m1, m2), c in b.items():
            for (n0, n1, n2), e in a.items():
                k = (m0 + n0, m1 + n1, m2 + n2)
                out[k] = get(k, 0) + c * e
        return Polynomial({k: v for k, v in out.items() if v}, _clean=True)

    __rmul__ = __mul__

    def __truediv__(self, c: Scalar) -> Polynomial:
        if isinstance(c, Polynomial):
            return divide_exact(self, c)
        c = Fraction(c)
        if not c:
            raise DivisionByZero("division by zero scalar")
        return self.scale(1 / c)

    def __pow__(self, n: int) -> Polynomial:
        if n < 0:
            raise ValueError("negative exponent")
        result = Polynomial.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Polynomial.const(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __repr__(self) -> str:
        from .parser import render_poly

        return f"Polynomial({render_poly(self)!r})"

    def __str__(self) -> str:
        from .parser import render_poly

        return render_poly(self)

    # calculus

    def partial(self, var, order: int = 1) -> Polynomial:
        return partial(self, var, order)

    def substitute_zero(self, var) -> Polynomial:
        """Set one variable to 0."""
        i = var_index(var)
        return Polynomial({m: c for m, c in self._terms.items() if m[i] == 0}, _clean=True)

    def evaluate(self, point: Iterable[Scalar]) -> Fraction:
        px, py, pz = (Fraction(v) for v in point)
        return sum((c * px ** m[0] * py ** m[1] * pz ** m[2] for m, c in self._terms.items()), Fraction(0))


def _coerce(p) -> Polynomial:
    if isinstance(p, Polynomial):
        return p
    if isinstance(p, (int, Fraction)):
        return Polynomial.const(p)
    raise TypeError(f"cannot use {type(p).__name__} as a polynomial")


ZERO = Polynomial()
ONE = Polynomial.const(1)
X = Polynomial.var("x")
Y = Polynomial.var("y")
Z = Polynomial.var("z")


def add(p: Polynomial, q: Polynomial) -> Polynomial:
    return p + q


def mul(p: Polynomial, q: Polynomial) -> Polynomial:
    return p * q


def partial(p: Polynomial, var, order: int = 1) -> Polynomial:
    """Divided-power derivative: x^b -> C(b, order) x^(b - order)."""
    i = var_index(var)
    if order < 0:
        raise ValueError("order must be non-negative")
    if order == 0:
        return p
    out = {}
    for m, c in p.terms.items():
        b = m[i]
        if b >= order:
            n = list(m)
            n[i] = b - order
            out[tuple(n)] = c * comb(b, order)
    return Polynomial(out, _clean=True)


def partial_multi(p: Polynomial, index: Monomial) -> Polynomial:
    """Apply d_x^(a) d_y^(b) d_z^(c) for index (a, b, c)."""
    a, b, c = index
    out = {}
    for m, v in p.terms.items():
        if m[0] >= a and m[1] >= b and m[2] >= c:
            out[(m[0] - a, m[1] - b, m[2] - c)] = v * comb(m[0], a) * comb(m[1], b) * comb(m[2], c)
    return Polynomial(out, _clean=True)


def euler_apply(p: Polynomial) -> Polynomial:
    return Polynomial({m: c * sum(m) for m, c in p.terms.items() if sum(m)}, _clean=True)


def is_homogeneous(p: Polynomial):
    """Common total degree, NEG_INF for zero, None if inhomogeneous."""
    if not p.terms:
        return NEG_INF
    degs = {sum(m) for m in p.terms}
    return degs.pop() if len(degs) == 1 else None


def divide_with_remainder(p: Polynomial, q: Polynomial) -> Tuple[Polynomial, Polynomial]:
    """Multivariate division of p by q under graded lex."""
    if not q:
        raise DivisionByZero("division by the zero polynomial")
    lm, lc = q.leading_term()
    rest = [(m, c) for m, c in q.terms.items() if m != lm]
    work = dict(p.terms)
    quot: Dict[Monomial, Fraction] = {}
    rem: Dict[Monomial, Fraction] = {}
    while work:
        m = max(work, key=grlex_key)
        c = work.pop(m)
        if monomial_divides(lm, m):
            s = (m[0] - lm[0], m[1] - lm[1], m[2] - lm[2])
            k = c / lc
            quot[s] = quot.get(s, 0) + k
            for n, e in rest:
                t = (n[0] + s[0], n[1] + s[1], n[2] + s[2])
                v = work.get(t, 0) - k * e
                if v:
                    work[t] = v
                else:
                    work.pop(t, None)
        else:
            rem[m] = c
    return Polynomial(quot), Polynomial(rem, _clean=True)


def divide_exact(p: Polynomial, q: Polynomial) -> Polynomial:
    quot, rem = divide_with_remainder(p, q)
    if rem:
        raise NotDivisible(f"{p} is not divisible by {q}")
    return quot
