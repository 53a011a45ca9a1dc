from __future__ import annotations

import random

import pytest
import sympy

from diffop_forge.errors import DegreeTooSmall, NotDivisibleModF, NotHomogeneous, NotIsolated
from diffop_forge.parser import parse_poly
from diffop_forge.poly import X, Y, Z
from diffop_forge.ring import build_context, divide_by_variable_mod_f, normal_form, validated_context
from conftest import context_for
from oracles import SYMS, divisible, from_sympy, random_poly, to_sympy


def test_groebner_basis_matches_sympy(family_f):
    ctx, gb = validated_context(parse_poly(family_f))
    ref = sympy.groebner([to_sympy(g) for g in ctx.grad], *SYMS, order="grlex")
    ours = {from_sympy(g).scale(1 / g_lc(from_sympy(g))) for g in [to_sympy(p) for p in gb.generators]}
    theirs = {from_sympy(g).scale(1 / g_lc(from_sympy(g))) for g in ref.exprs}
    assert ours == theirs
    assert gb.is_zero_dimensional()


def g_lc(p):
    return p.leading_term()[1]


def test_cubic_basis_is_squares():
    _, gb = validated_context(X ** 3 + Y ** 3 + Z ** 3)
    assert gb.to_json()["generators"] == ["x^2", "y^2", "z^2"]


@pytest.mark.parametrize("text", ["x^3", "x^2*y", "x^4+y^4"])
def test_not_isolated(text):
    with pytest.raises(NotIsolated):
        validated_context(parse_poly(text))


def test_hypotheses():
    with pytest.raises(NotHomogeneous):
        build_context(parse_poly("x^3+y^2"))
    with pytest.raises(DegreeTooSmall):
        build_context(parse_poly("x^2+y^2+z^2"))


def test_normal_form_is_remainder_mod_f(family_f):
    ctx = context_for(family_f)
    rng = random.Random(3)
    for _ in range(30):
        p = random_poly(rng, 2 * ctx.d, terms=6)
        r = normal_form(p, ctx)
        assert divisible(p - r, ctx.f)
        assert normal_form(r, ctx) == r
        assert normal_form(p + ctx.f * random_poly(rng, 3), ctx) == r


def test_divide_by_variable_mod_f(family_f):
    ctx = build_context(parse_poly(family_f))
    rng = random.Random(11)
    for var, v in zip("xyz", (X, Y, Z)):
        for _ in range(10):
            h = v * random_poly(rng, 4) + ctx.f * random_poly(rng, 2)
            q = divide_by_variable_mod_f(h, var, ctx)
            assert divisible(h - v * q, ctx.f)
    assert ctx.audit.calls == ctx.audit.verified == 30


def test_division_failure_is_reported(cubic):
    ctx = build_context(cubic.f)
    with pytest.raises(NotDivisibleModF):
        divide_by_variable_mod_f(Y ** 2, "x", ctx)
    # y^3 + z^3 = -x^3 mod f
    assert divide_by_variable_mod_f(Y ** 3 + Z ** 3, "x", ctx) == -(X ** 2)


def test_context_data(cubic):
    assert cubic.d == 3
    assert cubic.pd("xx") == X * 6
    assert cubic.grad[2] == Z * Z * 3
