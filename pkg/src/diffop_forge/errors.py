"""Exception hierarchy.

HypothesisError subclasses mean the input f is unusable (CLI exit 2).
MathCheckError subclasses mean a verification failed (CLI exit 1).
"""

from __future__ import annotations


class DiffOpForgeError(Exception):
    pass


class HypothesisError(DiffOpForgeError):
    pass


class MathCheckError(DiffOpForgeError):
    pass


class DivisionByZero(DiffOpForgeError, ZeroDivisionError):
    pass


class NotDivisible(DiffOpForgeError):
    pass


class NotHomogeneous(HypothesisError):
    pass


class DegreeTooSmall(HypothesisError):
    pass


class NotIsolated(HypothesisError):
    pass


class DegenerateForm(HypothesisError):
    pass


class NotDivisibleModF(MathCheckError):
    pass


class DimensionMismatch(DiffOpForgeError, ValueError):
    pass


class OrderTooHigh(DiffOpForgeError, ValueError):
    pass


class ComplexCheckFailed(MathCheckError):
    def __init__(self, message: str, junction=None, residual=None):
        super().__init__(message)
        self.junction = junction
        self.residual = residual


class ChainMapCheckFailed(MathCheckError):
    def __init__(self, message: str, square=None, residual=None):
        super().__init__(message)
        self.square = square
        self.residual = residual


class MinimalityFailed(MathCheckError):
    pass


class NotMinimal(MathCheckError):
    pass
