"""Recursive-descent parser for the polynomial grammar used in setup files.

Grammar (whitespace insensitive)::

    expr    := term (('+' | '-') term)*
    term    := ('-' | '+')* factor ('*' factor)*
    factor  := atom ('^' natural)?
    atom    := rational | name | '(' expr ')'
    rational:= integer ('/' positive-integer)?

Printing a polynomial and parsing it back is the identity.
"""

from __future__ import annotations

from fractions import Fraction
from typing import NamedTuple

from .errors import ParseError
from .poly import Polynomial, PolynomialRing


class _Token(NamedTuple):
    kind: str  # 'num', 'name', 'op', 'end'
    text: str
    line: int
    column: int


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    line, col = 1, 1
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch.isspace():
            i += 1
            col += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(_Token("num", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(_Token("name", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch in "+-*^()/":
            tokens.append(_Token("op", ch, line, col))
            i += 1
            col += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", line, col)
    tokens.append(_Token("end", "", line, col))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token], ring: PolynomialRing):
        self.tokens = tokens
        self.pos = 0
        self.ring = ring

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def error(self, message: str, tok: _Token | None = None):
        tok = tok or self.peek()
        raise ParseError(message, tok.line, tok.column)

    def parse(self) -> Polynomial:
        p = self.expr()
        tok = self.peek()
        if tok.kind != "end":
            self.error(f"unexpected trailing {tok.text!r}")
        return p

    def expr(self) -> Polynomial:
        p = self.term()
        while True:
            tok = self.peek()
            if tok.kind == "op" and tok.text in "+-":
                self.advance()
                q = self.term()
                p = p + q if tok.text == "+" else p - q
            else:
                return p

    def term(self) -> Polynomial:
        sign = 1
        while self.peek().kind == "op" and self.peek().text in "+-":
            if self.advance().text == "-":
                sign = -sign
        p = self.factor()
        while self.peek().kind == "op" and self.peek().text == "*":
            self.advance()
            p = p * self.factor()
        return p if sign > 0 else -p

    def factor(self) -> Polynomial:
        p = self.atom()
        if self.peek().kind == "op" and self.peek().text == "^":
            self.advance()
            tok = self.peek()
            if tok.kind != "num":
                self.error("exponent must be a natural number")
            self.advance()
            p = p ** int(tok.text)
        return p

    def atom(self) -> Polynomial:
        tok = self.peek()
        if tok.kind == "num":
            self.advance()
            numerator = int(tok.text)
            if self.peek().kind == "op" and self.peek().text == "/":
                self.advance()
                den_tok = self.peek()
                if den_tok.kind != "num":
                    self.error("expected integer denominator")
                self.advance()
                den = int(den_tok.text)
                if den == 0:
                    self.error("zero denominator in rational literal", den_tok)
                return self.ring.constant(Fraction(numerator, den))
            return self.ring.constant(numerator)
        if tok.kind == "name":
            self.advance()
            if tok.text not in self.ring.variables:
                self.error(f"unknown variable {tok.text!r}", tok)
            return self.ring.variable(tok.text)
        if tok.kind == "op" and tok.text == "(":
            self.advance()
            p = self.expr()
            close = self.peek()
            if close.kind != "op" or close.text != ")":
                self.error("expected ')'")
            self.advance()
            return p
        self.error(f"expected a term, found {tok.text or 'end of input'!r}")
        raise AssertionError("unreachable")


def parse_polynomial(text: str, ring: PolynomialRing) -> Polynomial:
    """Parse ``text`` into a canonical polynomial of ``ring``."""
    return _Parser(_tokenize(text), ring).parse()


def parse_polynomial_list(text: str, ring: PolynomialRing) -> list[Polynomial]:
    """Parse a comma-separated list of polynomials."""
    parts = [chunk for chunk in text.split(",")]
    return [parse_polynomial(chunk, ring) for chunk in parts]
