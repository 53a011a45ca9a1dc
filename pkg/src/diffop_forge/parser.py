"""Text format for polynomials.

Grammar (explicit '*' everywhere, no juxtaposition):

    expr   := ['+'|'-'] term (('+'|'-') term)*
    term   := factor ('*' factor)*
    factor := base ('^' integer)?
    base   := ident | integer | integer '/' integer | '(' expr ')'
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import FrozenSet, List

from .errors import DiffOpForgeError
from .poly import Polynomial

IDENT, INTEGER, PLUS, MINUS, STAR, CARET, LPAREN, RPAREN, SLASH, EOF = (
    "ident", "integer", "plus", "minus", "star", "caret", "lparen", "rparen", "slash", "eof",
)

_SINGLE = {"+": PLUS, "-": MINUS, "*": STAR, "^": CARET, "(": LPAREN, ")": RPAREN, "/": SLASH}


@dataclass(frozen=True)
class ExprToken:
    kind: str
    lexeme: str
    position: int


class ParseError(DiffOpForgeError, ValueError):
    def __init__(self, position: int, message: str, expected: FrozenSet[str] = frozenset()):
        self.position = position
        self.message = message
        self.expected = frozenset(expected)
        super().__init__(f"at offset {position}: {message}")


def tokenize(text: str) -> List[ExprToken]:
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch in "xyz":
            tokens.append(ExprToken(IDENT, ch, i))
            i += 1
        elif "0" <= ch <= "9":
            j = i
            while j < n and "0" <= text[j] <= "9":
                j += 1
            tokens.append(ExprToken(INTEGER, text[i:j], i))
            i = j
        elif ch in _SINGLE:
            tokens.append(ExprToken(_SINGLE[ch], ch, i))
            i += 1
        else:
            raise ParseError(i, f"unexpected character {ch!r}")
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.end = len(text)
        self.i = 0

    def peek(self) -> ExprToken:
        if self.i < len(self.tokens):
            return self.tokens[self.i]
        return ExprToken(EOF, "", self.end)

    def take(self, *kinds: str) -> ExprToken:
        tok = self.peek()
        if tok.kind not in kinds:
            what = "end of input" if tok.kind == EOF else repr(tok.lexeme)
            raise ParseError(tok.position, f"expected {' or '.join(kinds)}, got {what}", frozenset(kinds))
        self.i += 1
        return tok

    def parse(self) -> Polynomial:
        p = self.expr()
        self.take(EOF)
        return p

    def expr(self) -> Polynomial:
        sign = 1
        if self.peek().kind in (PLUS, MINUS):
            sign = -1 if self.take(PLUS, MINUS).kind == MINUS else 1
        total = self.term().scale(sign)
        while self.peek().kind in (PLUS, MINUS):
            op = self.take(PLUS, MINUS)
            t = self.term()
            total = total + t if op.kind == PLUS else total - t
        return total

    def term(self) -> Polynomial:
        p = self.factor()
        while self.peek().kind == STAR:
            self.take(STAR)
            p = p * self.factor()
        return p

    def factor(self) -> Polynomial:
        base = self.base()
        if self.peek().kind == CARET:
            self.take(CARET)
            tok = self.peek()
            if tok.kind == MINUS:
                raise ParseError(tok.position, "exponent must be a non-negative integer", frozenset({INTEGER}))
            exp = self.take(INTEGER)
            return base ** int(exp.lexeme)
        return base

    def base(self) -> Polynomial:
        tok = self.peek()
        if tok.kind == IDENT:
            self.i += 1
            return Polynomial.var(tok.lexeme)
        if tok.kind == INTEGER:
            self.i += 1
            num = int(tok.lexeme)
            if self.peek().kind == SLASH:
                self.take(SLASH)
                den_tok = self.take(INTEGER)
                den = int(den_tok.lexeme)
                if den == 0:
                    raise ParseError(den_tok.position, "zero denominator", frozenset({INTEGER}))
                return Polynomial.const(Fraction(num, den))
            return Polynomial.const(num)
        if tok.kind == LPAREN:
            self.i += 1
            p = self.expr()
            self.take(RPAREN)
            return p
        self.take(IDENT, INTEGER, LPAREN)
        raise AssertionError("unreachable")


def parse_poly(text: str) -> Polynomial:
    return _Parser(text).parse()


def _render_monomial(m) -> str:
    parts = []
    for name, e in zip("xyz", m):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def _render_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def render_poly(p: Polynomial) -> str:
    terms = p.sorted_terms()
    if not terms:
        return "0"
    out = []
    for k, (m, c) in enumerate(terms):
        neg = c < 0
        a = -c if neg else c
        mono = _render_monomial(m)
        if not mono:
            body = _render_coeff(a)
        elif a == 1:
            body = mono
        else:
            body = f"{_render_coeff(a)}*{mono}"
        if k == 0:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out)
