"""Single-entry perturbations of the glossary must be caught.

A perturbation is applied while the glossary is built, so it reaches every
matrix derived from the perturbed one.  Caught means the build's own
checks raise or at least one counted identity fails.
"""

from __future__ import annotations

import random

import pytest

from diffop_forge.errors import MathCheckError
from diffop_forge.glossary import SHAPES, build_glossary
from diffop_forge.identities import all_pass, run_suites
from diffop_forge.poly import X
from conftest import context_for
from oracles import FAMILY

DEPENDENT = ["C", "D", "EF", "mf", "complexes", "chainmaps"]


def caught(ctx, name, i, j) -> bool:
    try:
        g = build_glossary(ctx, perturb=(name, i, j, X))
    except MathCheckError:
        return True
    res = run_suites(ctx, DEPENDENT, g)
    return not all(all_pass(v) for v in res.values())


@pytest.mark.parametrize("f", FAMILY)
def test_one_entry_of_every_matrix(f):
    ctx = context_for(f)
    rng = random.Random(f)
    missed = []
    for name, (r, c) in SHAPES.items():
        i, j = rng.randrange(r), rng.randrange(c)
        if not caught(ctx, name, i, j):
            missed.append((name, i, j))
    assert missed == []


def test_every_entry_of_small_matrices():
    ctx = context_for("x^3+y^3+z^3+x*y*z")
    missed = []
    for name, (r, c) in SHAPES.items():
        if r * c > 12:
            continue
        for i in range(r):
            for j in range(c):
                if not caught(ctx, name, i, j):
                    missed.append((name, i, j))
    assert missed == []
