"""Recursive-descent parser for the expression grammar.

    expr   := term (("+" | "-") term)*
    term   := factor (("*" | "/") factor)*
    factor := "-" factor | "(" expr ")" | leaf
    leaf   := "exact" "(" rat "," ident ")"
            | "meas" "(" ident "," "[" rat "," rat "]" "," ident ")"
    rat    := ["-"] digits ["/" nonzero-digits]
    ident  := letter (letter | digit | "_")*

Whitespace is insignificant, "#" starts a comment running to end of line,
binary operators are left-associative, and unary minus binds tighter than
"*" and "/".  Leaf keywords keep numbers and identifiers unambiguous.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .expr import Add, Div, Dim, Exact, Expr, Interval, Meas, Mul, Neg, Sub, Token


class ParseError(ValueError):
    """Input text rejected by the grammar; position is a character offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at offset {position})")
        self.position = position


@dataclass(frozen=True)
class _Tok:
    kind: str  # IDENT, NUMBER, or the symbol itself
    text: str
    pos: int


_LEXEME = re.compile(
    r"""
      (?P<ws>\s+|\#[^\n]*)
    | (?P<ident>[A-Za-z][A-Za-z0-9_]*)
    | (?P<number>[0-9]+)
    | (?P<sym>[-+*/()\[\],])
    """,
    re.VERBOSE,
)


def _tokenize(text: str) -> list[_Tok]:
    toks: list[_Tok] = []
    i = 0
    while i < len(text):
        m = _LEXEME.match(text, i)
        if m is None:
            raise ParseError(f"unexpected character {text[i]!r}", i)
        if m.lastgroup == "ident":
            toks.append(_Tok("IDENT", m.group(), i))
        elif m.lastgroup == "number":
            toks.append(_Tok("NUMBER", m.group(), i))
        elif m.lastgroup == "sym":
            toks.append(_Tok(m.group(), m.group(), i))
        i = m.end()
    toks.append(_Tok("EOF", "", len(text)))
    return toks


class _Parser:
    def __init__(self, toks: list[_Tok]):
        self.toks = toks
        self.i = 0

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def advance(self) -> _Tok:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def accept(self, kind: str) -> _Tok | None:
        if self.peek().kind == kind:
            return self.advance()
        return None

    def expect(self, kind: str) -> _Tok:
        tok = self.peek()
        if tok.kind != kind:
            shown = tok.text or "end of input"
            raise ParseError(f"expected {kind!r}, found {shown!r}", tok.pos)
        return self.advance()

    def expression(self) -> Expr:
        node = self.term()
        while True:
            if self.accept("+"):
                node = Add(node, self.term())
            elif self.accept("-"):
                node = Sub(node, self.term())
            else:
                return node

    def term(self) -> Expr:
        node = self.factor()
        while True:
            if self.accept("*"):
                node = Mul(node, self.factor())
            elif self.accept("/"):
                node = Div(node, self.factor())
            else:
                return node

    def factor(self) -> Expr:
        if self.accept("-"):
            return Neg(self.factor())
        if self.accept("("):
            node = self.expression()
            self.expect(")")
            return node
        return self.leaf()

    def leaf(self) -> Expr:
        tok = self.peek()
        if tok.kind != "IDENT" or tok.text not in ("exact", "meas"):
            shown = tok.text or "end of input"
            raise ParseError(f"expected a leaf ('exact' or 'meas'), found {shown!r}", tok.pos)
        keyword = self.advance().text
        self.expect("(")
        if keyword == "exact":
            value = self.rational()
            self.expect(",")
            dim = Dim(self.expect("IDENT").text)
            self.expect(")")
            return Exact(value, dim)
        token = Token(self.expect("IDENT").text)
        self.expect(",")
        interval = self.interval()
        self.expect(",")
        dim = Dim(self.expect("IDENT").text)
        self.expect(")")
        return Meas(token, interval, dim)

    def interval(self) -> Interval:
        self.expect("[")
        lo = self.rational()
        self.expect(",")
        hi = self.rational()
        self.expect("]")
        # Interval construction rejects lo > hi with IntervalOrderError.
        return Interval(lo, hi)

    def rational(self) -> Fraction:
        negative = self.accept("-") is not None
        num_tok = self.expect("NUMBER")
        numerator = int(num_tok.text)
        denominator = 1
        if self.accept("/"):
            den_tok = self.expect("NUMBER")
            denominator = int(den_tok.text)
            if denominator == 0:
                raise ParseError("rational denominator must be nonzero", den_tok.pos)
        value = Fraction(numerator, denominator)
        return -value if negative else value


def parse(text: str) -> Expr:
    """Parse one expression; trailing non-comment input is an error."""
    parser = _Parser(_tokenize(text))
    node = parser.expression()
    parser.expect("EOF")
    return node


def parse_interval(text: str) -> Interval:
    """Parse a standalone interval literal such as "[2,5]" or "[-1/2,3]"."""
    parser = _Parser(_tokenize(text))
    interval = parser.interval()
    parser.expect("EOF")
    return interval


def parse_rational(text: str) -> Fraction:
    """Parse a standalone rational literal such as "9/2" or "-3"."""
    parser = _Parser(_tokenize(text))
    value = parser.rational()
    parser.expect("EOF")
    return value
