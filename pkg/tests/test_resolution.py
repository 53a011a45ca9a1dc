from __future__ import annotations

import pytest

from diffop_forge.poly import X, Y, Z
from diffop_forge.resolution import (
    TARGETS,
    augmentation_agreement,
    betti_table,
    build_target,
    closed_form_betti,
    coincidences,
)
from diffop_forge.weyl import build_generators
from conftest import context_for, glossary_for
from oracles import FAMILY

FERMAT = {3: "x^3+y^3+z^3", 4: "x^4+y^4+z^4", 5: "x^5+y^5+z^5"}
RANKS = {"D1": (5, 4), "D2": (12, 11), "D3": (22, 21), "S2": (7, 7), "S3": (10, 10)}

_RES = {}


def resolution(f, target):
    if (f, target) not in _RES:
        _RES[(f, target)] = build_target(context_for(f), target, glossary_for(f))
    return _RES[(f, target)]


def test_targets():
    assert set(TARGETS) == set(RANKS)


@pytest.mark.parametrize("target", sorted(RANKS))
def test_complex_minimal_and_periodic(family_f, target):
    res = resolution(family_f, target)
    assert all(r.is_zero() for _, r in res.junction_residuals())
    assert res.minimality_failures(8) == []
    assert res.report["tail_mf_over_Q"]
    r0, r1 = RANKS[target]
    ranks = res.ranks(6)
    assert ranks[0] == r0 and ranks[1] == r1
    if target in ("D1", "D2", "D3"):
        assert ranks[2:] == [r1] * 5


@pytest.mark.parametrize("d", [3, 4, 5])
@pytest.mark.parametrize("target", ["D2", "D3", "S2", "S3"])
def test_betti_closed_forms(d, target):
    computed = betti_table(resolution(FERMAT[d], target), 3)
    assert computed == closed_form_betti(target, d, 6)


@pytest.mark.parametrize("d", [3, 4, 5])
def test_d1_betti_matches_swapped_form(d):
    """The D1 table agrees with the closed form only after exchanging the
    multiplicities 1 and 3 in every positive homological index."""
    computed = betti_table(resolution(FERMAT[d], "D1"), 3)
    assert computed == closed_form_betti("D1", d, 6, corrected=True)
    assert computed.restrict(0) == closed_form_betti("D1", d, 0)


def test_d1_shift_forced_by_homogeneity():
    # F_1 -> F_0 sends the three Hamiltonian slots (degree d-2) through x,y,z-linear entries,
    # so three generators of F_1 sit in degree d-1 = nd - 1 for n = 1.
    assert betti_table(resolution(FERMAT[4], "D1"), 1).row(1) == {3: 3, 5: 1}


def test_betti_non_fermat(family_f):
    ctx = context_for(family_f)
    for target in ("D2", "D3"):
        assert betti_table(resolution(family_f, target), 3) == closed_form_betti(target, ctx.d, 6)


def test_coincident_degrees_merge():
    table = closed_form_betti("D2", 3, 0)
    assert table.row(0) == {0: 3, 1: 9}
    notes = coincidences("D2", 3, 0)
    assert notes and "beta_0,1" in notes[0]
    assert coincidences("D2", 5, 6) == []


def test_augmentation_agrees_with_generators(family_f):
    ctx = context_for(family_f)
    gens = build_generators(ctx, 3)
    for target in ("D1", "D2", "D3"):
        agree = augmentation_agreement(resolution(family_f, target), gens)
        assert all(agree.values()), agree


def test_frames_are_homogeneous():
    res = resolution(FERMAT[4], "D3")
    for k in range(5):
        frame = res.frame(k)
        assert len(frame.col_degrees) == res.rank(k)


def test_json_and_text():
    res = resolution(FERMAT[3], "S2")
    data = res.to_json(2)
    assert data["name"] == "S2" and len(data["frames"]) == 3
    assert "S2" in res.to_text(1)
