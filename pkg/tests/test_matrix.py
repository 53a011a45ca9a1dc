from __future__ import annotations

import random

import pytest
import sympy

from diffop_forge.errors import DimensionMismatch
from diffop_forge.matrix import PolyMatrix, block, hstack, matmul, vstack
from diffop_forge.poly import ONE, X, Y, ZERO
from oracles import random_poly, to_sympy


def _rand(rng, m, n):
    return PolyMatrix([[random_poly(rng, 3, 2) for _ in range(n)] for _ in range(m)])


def _sym(A):
    return sympy.Matrix([[to_sympy(e) for e in row] for row in A.entries])


def test_matmul_against_sympy():
    rng = random.Random(2)
    for _ in range(20):
        m, k, n = rng.randint(1, 4), rng.randint(1, 4), rng.randint(1, 4)
        A, B = _rand(rng, m, k), _rand(rng, k, n)
        assert (_sym(matmul(A, B)) - _sym(A) * _sym(B)).expand() == sympy.zeros(m, n)


def test_shape_errors():
    A = PolyMatrix.zeros(2, 3)
    with pytest.raises(DimensionMismatch):
        matmul(A, A)
    with pytest.raises(DimensionMismatch):
        A + PolyMatrix.zeros(3, 2)


def test_blocks_and_stacks():
    I = PolyMatrix.identity(2)
    M = block([[I, None], [None, I.scale(3)]])
    assert M.shape == (4, 4)
    assert M[3, 3] == ONE * 3 and M[0, 3] == ZERO
    assert hstack(I, I).shape == (2, 4)
    assert vstack(I, I).shape == (4, 2)


def test_transpose_and_json_round_trip():
    A = PolyMatrix([[X, Y], [ONE, X * Y]])
    assert A.T.T == A
    assert PolyMatrix.from_json(A.to_json()) == A
    assert A.T[0, 1] == ONE


def test_zero_sized():
    Z = PolyMatrix.zeros(0, 3)
    assert Z.shape == (0, 3)
    assert matmul(PolyMatrix.zeros(2, 0), Z).shape == (2, 3)
