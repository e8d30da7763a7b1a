"""Recursive-descent parser for polynomial expressions.

Grammar (whitespace is ignored)::

    expr   := term (("+" | "-") term)*
    term   := unary (("*")? unary)*        juxtaposition multiplies: 3T1, 2q^3
    unary  := ("+" | "-") unary | power
    power  := atom ("^" INTEGER)?
    atom   := INTEGER | VARIABLE | "(" expr ")"

Variables are ``T<k>`` for theta polynomials and ``q`` for one-variable
series.  Polynomials are dicts from exponent tuples to ``Fraction``.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .errors import IndexOutOfRange, PolySyntaxError
from .qseries import ThetaPolynomial

_TOKEN = re.compile(r"\s*(?:(\d+)|(T\d+|q)|([-+*^()]))")


def _tokenize(src: str):
    pos = 0
    tokens = []
    while pos < len(src):
        if src[pos:].strip() == "":
            break
        m = _TOKEN.match(src, pos)
        if not m:
            bad = len(src) - len(src[pos:].lstrip())
            raise PolySyntaxError(f"unexpected character {src[bad]!r}", bad)
        start = m.start(m.lastindex)
        kind = ("int", "var", "op")[m.lastindex - 1]
        tokens.append((kind, m.group(m.lastindex), start))
        pos = m.end()
    tokens.append(("end", "", len(src)))
    return tokens


class _Parser:
    def __init__(self, src: str, nvars: int, variable_index):
        self.tokens = _tokenize(src)
        self.pos = 0
        self.nvars = nvars
        self.variable_index = variable_index

    def peek(self):
        return self.tokens[self.pos]

    def take(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def const(self, c) -> dict:
        return {(0,) * self.nvars: Fraction(c)} if c else {}

    @staticmethod
    def add(a: dict, b: dict, sign=1) -> dict:
        out = dict(a)
        for e, c in b.items():
            out[e] = out.get(e, 0) + sign * c
        return {e: c for e, c in out.items() if c}

    @staticmethod
    def mul(a: dict, b: dict) -> dict:
        out: dict = {}
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return {e: c for e, c in out.items() if c}

    def parse(self) -> dict:
        if self.peek()[0] == "end":
            raise PolySyntaxError("empty expression", 0)
        value = self.expr()
        kind, text, pos = self.peek()
        if kind != "end":
            raise PolySyntaxError(f"unexpected {text!r}", pos)
        return value

    def expr(self) -> dict:
        value = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            sign = 1 if self.take()[1] == "+" else -1
            value = self.add(value, self.term(), sign)
        return value

    def _starts_factor(self, tok) -> bool:
        kind, text, _ = tok
        return kind in ("int", "var") or (kind == "op" and text == "(")

    def term(self) -> dict:
        value = self.unary()
        while True:
            tok = self.peek()
            if tok[0] == "op" and tok[1] == "*":
                self.take()
                value = self.mul(value, self.unary())
            elif self._starts_factor(tok):
                value = self.mul(value, self.power())
            else:
                return value

    def unary(self) -> dict:
        tok = self.peek()
        if tok[0] == "op" and tok[1] in ("+", "-"):
            self.take()
            inner = self.unary()
            return inner if tok[1] == "+" else {e: -c for e, c in inner.items()}
        return self.power()

    def power(self) -> dict:
        base = self.atom()
        tok = self.peek()
        if tok[0] == "op" and tok[1] == "^":
            self.take()
            kind, text, pos = self.take()
            if kind != "int":
                raise PolySyntaxError("exponent must be a non-negative integer", pos)
            out = self.const(1)
            for _ in range(int(text)):
                out = self.mul(out, base)
            return out
        return base

    def atom(self) -> dict:
        kind, text, pos = self.take()
        if kind == "int":
            return self.const(int(text))
        if kind == "var":
            n = self.variable_index(text, pos)
            exps = [0] * self.nvars
            exps[n] = 1
            return {tuple(exps): Fraction(1)}
        if kind == "op" and text == "(":
            value = self.expr()
            kind, text, pos = self.take()
            if not (kind == "op" and text == ")"):
                raise PolySyntaxError("expected ')'", pos)
            return value
        raise PolySyntaxError(f"unexpected {text or 'end of input'!r}", pos)


def parse_poly(src: str, d_g: int) -> ThetaPolynomial:
    """Parse a polynomial in T1..T<d_g>."""

    def index(text, pos):
        if text == "q":
            raise PolySyntaxError("unexpected variable 'q'", pos)
        k = int(text[1:])
        if not 1 <= k <= d_g:
            raise IndexOutOfRange(f"variable {text} outside T1..T{d_g}")
        return k - 1

    return ThetaPolynomial(d_g, _Parser(src, d_g, index).parse())


def parse_q_polynomial(src: str) -> dict[int, Fraction]:
    """Parse a polynomial in q into {exponent: coefficient}."""

    def index(text, pos):
        if text != "q":
            raise PolySyntaxError(f"unexpected variable {text!r}", pos)
        return 0

    return {e[0]: c for e, c in _Parser(src, 1, index).parse().items()}
