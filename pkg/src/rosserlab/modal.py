"""Propositional modal formulas: syntax trees, parsing, printing, substitution."""

from __future__ import annotations

from dataclasses import field
from typing import Iterator, Mapping

from ._tree import hashed_node
from ._syntax import (
    PREC_AND,
    PREC_IMP,
    PREC_OR,
    PREC_UNARY,
    Connectives,
    ParseError,
    Parser,
    wrap,
)

__all__ = [
    "Formula",
    "Bot",
    "Var",
    "Not",
    "And",
    "Or",
    "Imp",
    "Box",
    "BOT",
    "TOP",
    "diamond",
    "parse_modal",
    "print_modal",
    "subformulas",
    "substitute",
    "variables",
    "modal_depth",
    "size",
]


class Formula:
    """Base class of modal formula nodes. Nodes are immutable and hashable."""

    __slots__ = ()

    def __str__(self) -> str:
        return print_modal(self)

    def children(self) -> tuple["Formula", ...]:
        return ()


@hashed_node
class Bot(Formula):
    _h: int = field(default=0, init=False, compare=False)


@hashed_node
class Var(Formula):
    name: str
    _h: int = field(default=0, init=False, compare=False)


@hashed_node
class Not(Formula):
    arg: Formula
    _h: int = field(default=0, init=False, compare=False)

    def children(self):
        return (self.arg,)


@hashed_node
class Box(Formula):
    arg: Formula
    _h: int = field(default=0, init=False, compare=False)

    def children(self):
        return (self.arg,)


@hashed_node
class And(Formula):
    left: Formula
    right: Formula
    _h: int = field(default=0, init=False, compare=False)

    def children(self):
        return (self.left, self.right)


@hashed_node
class Or(Formula):
    left: Formula
    right: Formula
    _h: int = field(default=0, init=False, compare=False)

    def children(self):
        return (self.left, self.right)


@hashed_node
class Imp(Formula):
    left: Formula
    right: Formula
    _h: int = field(default=0, init=False, compare=False)

    def children(self):
        return (self.left, self.right)


BOT = Bot()
TOP = Not(BOT)


def diamond(f: Formula) -> Formula:
    """``<>f``, which is notation for ``~[]~f``."""
    return Not(Box(Not(f)))


_CONNECTIVES = Connectives(neg=Not, conj=And, disj=Or, imp=Imp)
_IDENT_FIRST = set("abcdefghijklmnopqrstuvwxyz")
_IDENT_REST = _IDENT_FIRST | set("0123456789_")


def _is_identifier(name: str) -> bool:
    return bool(name) and name[0] in _IDENT_FIRST and all(ch in _IDENT_REST for ch in name)


def _modal_atom(p: Parser) -> Formula:
    tok = p.tok
    if tok.kind == "name":
        p.advance()
        if tok.value == "bot":
            return BOT
        if not _is_identifier(tok.value):
            raise ParseError(f"invalid variable name {tok.value!r}", tok.pos, p.text)
        return Var(tok.value)
    p.error(f"unexpected {tok.value!r}")


def _box(p: Parser) -> Formula:
    p.advance()
    p.expect("]")
    return Box(p.parse_unary())


def _dia(p: Parser) -> Formula:
    p.advance()
    return diamond(p.parse_unary())


def parse_modal(text: str) -> Formula:
    """Parse ASCII modal syntax (``bot``, ``~``, ``&``, ``|``, ``->``, ``[]``, ``<>``).

    >>> parse_modal("[]~p -> []~[]p")
    Imp(Box(Not(Var('p'))), Box(Not(Box(Var('p')))))
    """
    return Parser(text, _CONNECTIVES, _modal_atom, {"[": _box, "dia": _dia}).parse()


def _show(f: Formula) -> tuple[str, int]:
    if isinstance(f, Var):
        return f.name, PREC_UNARY
    if isinstance(f, Bot):
        return "bot", PREC_UNARY
    if isinstance(f, Not):
        s, p = _show(f.arg)
        return "~" + wrap(s, p, PREC_UNARY), PREC_UNARY
    if isinstance(f, Box):
        s, p = _show(f.arg)
        return "[]" + wrap(s, p, PREC_UNARY), PREC_UNARY
    (ls, lp), (rs, rp) = _show(f.left), _show(f.right)
    if isinstance(f, And):
        return f"{wrap(ls, lp, PREC_AND)} & {wrap(rs, rp, PREC_UNARY)}", PREC_AND
    if isinstance(f, Or):
        return f"{wrap(ls, lp, PREC_OR)} | {wrap(rs, rp, PREC_AND)}", PREC_OR
    return f"{wrap(ls, lp, PREC_OR)} -> {wrap(rs, rp, PREC_IMP)}", PREC_IMP


def print_modal(f: Formula) -> str:
    return _show(f)[0]


def _postorder(f: Formula) -> Iterator[Formula]:
    for c in f.children():
        yield from _postorder(c)
    yield f


def subformulas(f: Formula) -> list[Formula]:
    """All distinct subtrees, children before parents (post-order, first visit)."""
    seen: dict[Formula, None] = {}
    for g in _postorder(f):
        seen.setdefault(g, None)
    return list(seen)


def size(f: Formula) -> int:
    """Node count of the tree."""
    return 1 + sum(size(c) for c in f.children())


def variables(f: Formula) -> list[str]:
    """Variable names in order of first occurrence."""
    return list(dict.fromkeys(g.name for g in _postorder(f) if isinstance(g, Var)))


def modal_depth(f: Formula) -> int:
    if isinstance(f, Box):
        return 1 + modal_depth(f.arg)
    return max((modal_depth(c) for c in f.children()), default=0)


def substitute(f: Formula, mapping: Mapping[str, Formula]) -> Formula:
    """Simultaneous substitution at ``Var`` leaves; unmapped variables stay."""
    if isinstance(f, Var):
        return mapping.get(f.name, f)
    if isinstance(f, Bot):
        return f
    if isinstance(f, (Not, Box)):
        arg = substitute(f.arg, mapping)
        return f if arg is f.arg else type(f)(arg)
    left, right = substitute(f.left, mapping), substitute(f.right, mapping)
    if left is f.left and right is f.right:
        return f
    return type(f)(left, right)
