from __future__ import annotations

import pytest

from diffop_forge.identities import SUITES, all_pass, counted, run_suites
from conftest import context_for, glossary_for

# (total checks, counted checks) per suite; the difference is informational
# probes of printed variants
MANIFEST = {
    "A": (106, 100),
    "B": (60, 58),
    "C": (35, 35),
    "D": (24, 22),
    "EF": (21, 16),
    "mf": (6, 6),
    "complexes": (27, 27),
    "chainmaps": (9, 9),
}

_RUNS = {}


def suites_for(f):
    if f not in _RUNS:
        _RUNS[f] = run_suites(context_for(f), ["all"], glossary_for(f))
    return _RUNS[f]


def test_suite_names():
    assert tuple(MANIFEST) == SUITES


def test_manifest_counts(family_f):
    results = suites_for(family_f)
    assert {k: (len(v), len(counted(v))) for k, v in results.items()} == MANIFEST


@pytest.mark.parametrize("suite", SUITES)
def test_every_counted_check_passes(family_f, suite):
    checks = suites_for(family_f)[suite]
    failures = [c.id for c in counted(checks) if not c.passed]
    assert failures == []
    assert all_pass(checks)


def test_ids_unique(family_f):
    ids = [c.id for v in suites_for(family_f).values() for c in v]
    assert len(ids) == len(set(ids))


def test_arena_q_identities_are_exact(family_f):
    for v in suites_for(family_f).values():
        for c in counted(v):
            if c.arena == "Q":
                assert c.state == "pass"


def test_euler_probes_only_vanish_mod_f(family_f):
    by_id = {c.id: c for v in suites_for(family_f).values() for c in v}
    for key in ("A.2nd-Euler.Qprobe", "A.3rd-Euler.Qprobe", "D.c:basic-Eul.1.Qprobe"):
        assert by_id[key].informational
        assert by_id[key].state == "Q-only-mod-f"


def test_printed_variants_are_rejected():
    by_id = {c.id: c for v in suites_for("x^3*y+y^3*z+z^3*x").values() for c in v}
    for key in ("A.eq2-3.printed.xyz", "A.Der-delt.printed.x", "B.H-on-Cram1.printed.xyz", "F.second-lift-blocks"):
        assert by_id[key].state == "fail"
    assert by_id["D.c:identity-RS-4-2-1.1.printed"].state == "shape-error"
    assert by_id["F.second-lift-blocks.Pi-with-delta"].passed
    assert by_id["F.third-lift-blocks"].passed


def test_chain_map_squares_present(family_f):
    ids = {c.id for c in suites_for(family_f)["chainmaps"]} | {c.id for c in suites_for(family_f)["EF"]}
    assert {"F.square1", "F.square2", "F.square3"} <= ids


def test_single_suite_and_unknown(cubic):
    only = run_suites(cubic, ["mf"], glossary_for("x^3+y^3+z^3"))
    assert list(only) == ["mf"]
    with pytest.raises(ValueError):
        run_suites(cubic, ["nope"])


def test_json_view(cubic):
    check = suites_for("x^3+y^3+z^3")["A"][0]
    data = check.to_json(verbose=True)
    assert set(data) >= {"id", "arena", "state", "passed", "informational"}
