from __future__ import annotations

import pytest

from diffop_forge.errors import DimensionMismatch
from diffop_forge.glossary import SHAPES, build_glossary, check_shapes, verify_matrix_factorization
from diffop_forge.matrix import reduce_mod_f
from diffop_forge.poly import X
from diffop_forge.resolution import verify_ses_surjectivity
from conftest import context_for, glossary_for


def test_shapes(family_f):
    g = glossary_for(family_f)
    check_shapes(g)
    assert sum(r * c for r, c in SHAPES.values()) == 1543
    assert g.M0_2.shape == (6, 7) and g.M0_3.shape == (10, 10)


@pytest.mark.parametrize("i", [1, 2, 3])
def test_matrix_factorizations_both_orders(family_f, i):
    g = glossary_for(family_f)
    ctx = g.ctx
    rep = verify_matrix_factorization((g[f"M1_{i}"], g[f"M2_{i}"]), ctx.f.scale(ctx.d))
    assert rep.ab_ok and rep.ba_ok


def test_mf_shape_check(cubic):
    g = glossary_for("x^3+y^3+z^3")
    with pytest.raises(DimensionMismatch):
        verify_matrix_factorization((g.M1_2, g.M1_3), cubic.f)


@pytest.mark.parametrize("J, M", [("J21", "M0_2"), ("J32", "M0_3")])
def test_m0_columns_lie_in_kernel(family_f, J, M):
    g = glossary_for(family_f)
    assert reduce_mod_f(g[J] @ g[M], g.ctx).is_zero()


@pytest.mark.parametrize("order", [2, 3])
def test_m0_columns_lift_to_generators(family_f, order):
    ctx = context_for(family_f)
    report = verify_ses_surjectivity(ctx, order, glossary_for(family_f))
    assert report["passed"], report["columns"]
    assert len(report["columns"]) == {2: 7, 3: 10}[order]


def test_errata_log(family_f):
    g = glossary_for(family_f)
    where = sorted((e["matrix"], e["row"], e["col"]) for e in g.errata)
    assert where == [("A3", 4, 1), ("A3", 4, 2)] + sorted(("Z", r, c) for r, c in [(7, 0), (8, 0), (2, 1), (5, 1), (1, 2), (3, 2)])


def test_klein_errata_differ_from_printed():
    g = glossary_for("x^3*y+y^3*z+z^3*x")
    assert all(e["printed"] != e["corrected"] for e in g.errata)


def test_aliases(cubic):
    g = glossary_for("x^3+y^3+z^3")
    assert g["theta2_2"] == g.theta_even_2
    assert g.Jac == g.J10
    assert "adj" in g


def test_perturbation_hook(cubic):
    g = build_glossary(cubic, perturb=("sigma1", 0, 0, X))
    base = glossary_for("x^3+y^3+z^3")
    assert g.sigma1[0, 0] == base.sigma1[0, 0] + X
    with pytest.raises(IndexError):
        build_glossary(cubic, perturb=("sigma1", 50, 0, X))
    with pytest.raises(KeyError):
        build_glossary(cubic, perturb=("nonexistent", 0, 0, X))


def test_post_hoc_perturbed_copy():
    base = glossary_for("x^3+y^3+z^3")
    p = base.perturbed("B1", 0, 0)
    assert p.B1 != base.B1 and base.B1 == glossary_for("x^3+y^3+z^3").B1
