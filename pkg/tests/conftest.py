from __future__ import annotations

import pytest

from diffop_forge.parser import parse_poly
from diffop_forge.ring import validated_context
from oracles import FAMILY

_CTX = {}
_GLOSSARY = {}


def context_for(f: str):
    if f not in _CTX:
        _CTX[f] = validated_context(parse_poly(f))[0]
    return _CTX[f]


def glossary_for(f: str):
    from diffop_forge.glossary import build_glossary

    if f not in _GLOSSARY:
        _GLOSSARY[f] = build_glossary(context_for(f))
    return _GLOSSARY[f]


@pytest.fixture(params=FAMILY)
def family_f(request):
    return request.param


@pytest.fixture
def cubic():
    return context_for("x^3+y^3+z^3")


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
