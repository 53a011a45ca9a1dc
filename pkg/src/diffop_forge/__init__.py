"""Exact computations with differential operators on the hypersurface
ring Q[x,y,z]/(f) for a ternary form f with an isolated singularity."""

from __future__ import annotations

from .errors import DiffOpForgeError, HypothesisError, MathCheckError
from .glossary import GlossaryTable, build_glossary
from .parser import ParseError, parse_poly, render_poly
from .poly import Polynomial
from .resolution import PeriodicComplex, betti_table, build_target, closed_form_betti
from .ring import RingContext, build_context, validated_context
from .weyl import DiffOp, build_generators, compose, is_member

__version__ = "0.1.0"

__all__ = [
    "DiffOp",
    "DiffOpForgeError",
    "GlossaryTable",
    "HypothesisError",
    "MathCheckError",
    "ParseError",
    "PeriodicComplex",
    "Polynomial",
    "RingContext",
    "betti_table",
    "build_context",
    "build_generators",
    "build_glossary",
    "build_target",
    "closed_form_betti",
    "compose",
    "is_member",
    "parse_poly",
    "render_poly",
    "validated_context",
]
