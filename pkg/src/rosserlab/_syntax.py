"""Shared tokenizer, precedence parser and printer for the two formula languages.

Both the modal language and the object language use the same connective
grammar: ``~`` and prefix operators bind tightest, then ``&``, ``|`` and
``->`` (right-associative). Only the atoms differ, so each language plugs
in its own atom parser and constructor table.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<arrow>->)
  | (?P<dia><>)
  | (?P<str>"[^"]*")
  | (?P<num>\d+)
  | (?P<name>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<punct>[~&|()\[\]])
    """,
    re.VERBOSE,
)


class ParseError(ValueError):
    """Malformed formula text; ``pos`` is the 0-based character offset."""

    def __init__(self, message: str, pos: int, text: str = ""):
        self.pos = pos
        self.text = text
        super().__init__(f"{message} at position {pos}")


@dataclass(frozen=True)
class Token:
    kind: str
    value: str
    pos: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos, text)
        kind = m.lastgroup
        if kind != "ws":
            value = m.group()
            tokens.append(Token(value if kind == "punct" else kind, value, pos))
        pos = m.end()
    tokens.append(Token("eof", "", len(text)))
    return tokens


@dataclass(frozen=True)
class Connectives:
    neg: Callable
    conj: Callable
    disj: Callable
    imp: Callable


class Parser:
    """Recursive-descent parser over a token list.

    ``atom`` is called with the parser positioned on an atom token and must
    consume it. ``prefix`` maps a token kind to a handler for extra unary
    operators (the modal language registers ``[`` and ``dia``).
    """

    def __init__(self, text, connectives, atom, prefix=None):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0
        self.c = connectives
        self.atom = atom
        self.prefix = prefix or {}

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind: str) -> Token:
        if self.tok.kind != kind:
            what = self.tok.value or "end of input"
            raise ParseError(f"expected {kind!r}, found {what!r}", self.tok.pos, self.text)
        return self.advance()

    def error(self, message: str):
        raise ParseError(message, self.tok.pos, self.text)

    def parse(self):
        if self.tok.kind == "eof":
            self.error("empty formula")
        f = self.parse_imp()
        if self.tok.kind != "eof":
            self.error(f"unexpected {self.tok.value!r}")
        return f

    def parse_imp(self):
        left = self.parse_or()
        if self.tok.kind == "arrow":
            self.advance()
            return self.c.imp(left, self.parse_imp())
        return left

    def parse_or(self):
        left = self.parse_and()
        while self.tok.kind == "|":
            self.advance()
            left = self.c.disj(left, self.parse_and())
        return left

    def parse_and(self):
        left = self.parse_unary()
        while self.tok.kind == "&":
            self.advance()
            left = self.c.conj(left, self.parse_unary())
        return left

    def parse_unary(self):
        kind = self.tok.kind
        if kind == "~":
            self.advance()
            return self.c.neg(self.parse_unary())
        if kind in self.prefix:
            return self.prefix[kind](self)
        if kind == "(":
            self.advance()
            f = self.parse_imp()
            self.expect(")")
            return f
        if kind == "eof":
            self.error("unexpected end of input")
        return self.atom(self)


# precedence levels used by the printers
PREC_IMP, PREC_OR, PREC_AND, PREC_UNARY = 1, 2, 3, 4


def wrap(s: str, prec: int, need: int) -> str:
    return f"({s})" if prec < need else s
