"""The object language: opaque arithmetical atoms under propositional connectives.

Atoms stand for the sentences the constructions talk about: ``S(n)`` (the
stage function takes value n), ``PR[g](c)``/``PR[g'](c)`` (a Rosser
predicate applied to code c), ``F(p)`` (the interpretation of a modal
variable) and named atoms, among which ``"0=1"`` is reserved.

Gödel numbering
---------------
Codes are a bijection between formulas and the positive integers::

    code = 1 + 8*q + tag

with ``tag`` naming the constructor and ``q`` its payload: the atom
argument, ``code(arg) - 1`` for negation, or the Cantor pairing of the two
child codes (minus one) for binary connectives. Consequences used
throughout: 0 is never a code, every positive integer decodes, a proper
subformula always has a smaller code, ``code(S(n)) > n`` and
``code(PR[t](c)) > c``. The k-th formula of the canonical enumeration is
simply ``decode(k + 1)``.
"""

from __future__ import annotations

from dataclasses import field
from functools import lru_cache
from math import isqrt
from typing import Iterator

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
from ._tree import hashed_node

__all__ = [
    "ObjFormula",
    "SAtom",
    "PRAtom",
    "FAtom",
    "Named",
    "Not",
    "And",
    "Or",
    "Imp",
    "FALSUM",
    "PR_TAGS",
    "godel_code",
    "decode",
    "neg_code",
    "enumerate_formulas",
    "formulas_up_to",
    "parse_obj",
    "print_obj",
    "is_atomic",
    "strip_negations",
    "negations",
    "big_or",
    "atoms_of",
]

PR_TAGS = ("g", "g'")

TAG_NAMED, TAG_S, TAG_F, TAG_PR, TAG_NOT, TAG_AND, TAG_OR, TAG_IMP = range(8)


class ObjFormula:
    __slots__ = ()

    def __str__(self) -> str:
        return print_obj(self)

    def children(self) -> tuple["ObjFormula", ...]:
        return ()

    @property
    def code(self) -> int:
        c = self.__dict__.get("_code")
        if c is None:
            c = _encode(self)
            object.__setattr__(self, "_code", c)
        return c


def _check_s(self):
    if not isinstance(self.n, int) or self.n < 1:
        raise ValueError("S-atoms are indexed by n >= 1")


def _check_pr(self):
    if self.tag not in PR_TAGS:
        raise ValueError(f"unknown predicate tag {self.tag!r}")
    if not isinstance(self.arg, int) or self.arg < 1:
        raise ValueError("PR argument must be a Gödel number (>= 1)")


def _check_f(self):
    ident_index(self.var)


def _check_named(self):
    if self.name != "0=1":
        ident_index(self.name)


@hashed_node(check=_check_s)
class SAtom(ObjFormula):
    n: int
    _h: int = field(default=0, init=False, compare=False)


@hashed_node(check=_check_pr)
class PRAtom(ObjFormula):
    tag: str
    arg: int
    _h: int = field(default=0, init=False, compare=False)

    @property
    def formula(self) -> "ObjFormula":
        return decode(self.arg)


@hashed_node(check=_check_f)
class FAtom(ObjFormula):
    var: str
    _h: int = field(default=0, init=False, compare=False)


@hashed_node(check=_check_named)
class Named(ObjFormula):
    name: str
    _h: int = field(default=0, init=False, compare=False)


@hashed_node
class Not(ObjFormula):
    arg: ObjFormula
    _h: int = field(default=0, init=False, compare=False)

    def children(self):
        return (self.arg,)


@hashed_node
class And(ObjFormula):
    left: ObjFormula
    right: ObjFormula
    _h: int = field(default=0, init=False, compare=False)

    def children(self):
        return (self.left, self.right)


@hashed_node
class Or(ObjFormula):
    left: ObjFormula
    right: ObjFormula
    _h: int = field(default=0, init=False, compare=False)

    def children(self):
        return (self.left, self.right)


@hashed_node
class Imp(ObjFormula):
    left: ObjFormula
    right: ObjFormula
    _h: int = field(default=0, init=False, compare=False)

    def children(self):
        return (self.left, self.right)


FALSUM = Named("0=1")
_BINARY = {And: TAG_AND, Or: TAG_OR, Imp: TAG_IMP}
_BINARY_BY_TAG = {v: k for k, v in _BINARY.items()}


def is_atomic(f: ObjFormula) -> bool:
    """Propositionally atomic: not built by a connective."""
    return isinstance(f, (SAtom, PRAtom, FAtom, Named))


# --------------------------------------------------------------------------
# identifiers <-> naturals (bijective, shortest first)

_FIRST = "abcdefghijklmnopqrstuvwxyz"
_REST = _FIRST + "0123456789_"


def ident_index(name: str) -> int:
    if not name or name[0] not in _FIRST or any(c not in _REST for c in name):
        raise ValueError(f"not an identifier: {name!r}")
    offset = 0
    for length in range(1, len(name)):
        offset += 26 * 37 ** (length - 1)
    value = _FIRST.index(name[0])
    for c in name[1:]:
        value = value * 37 + _REST.index(c)
    return offset + value


def ident_from_index(n: int) -> str:
    length = 1
    while n >= 26 * 37 ** (length - 1):
        n -= 26 * 37 ** (length - 1)
        length += 1
    chars = []
    for _ in range(length - 1):
        n, r = divmod(n, 37)
        chars.append(_REST[r])
    chars.append(_FIRST[n])
    return "".join(reversed(chars))


def _cantor(x: int, y: int) -> int:
    s = x + y
    return s * (s + 1) // 2 + y


def _uncantor(z: int) -> tuple[int, int]:
    w = (isqrt(8 * z + 1) - 1) // 2
    y = z - w * (w + 1) // 2
    return w - y, y


# --------------------------------------------------------------------------
# numbering


def _encode(f: ObjFormula) -> int:
    if isinstance(f, Named):
        q = 0 if f.name == "0=1" else 1 + ident_index(f.name)
        tag = TAG_NAMED
    elif isinstance(f, SAtom):
        q, tag = f.n - 1, TAG_S
    elif isinstance(f, FAtom):
        q, tag = ident_index(f.var), TAG_F
    elif isinstance(f, PRAtom):
        q, tag = 2 * (f.arg - 1) + PR_TAGS.index(f.tag), TAG_PR
    elif isinstance(f, Not):
        q, tag = f.arg.code - 1, TAG_NOT
    else:
        q, tag = _cantor(f.left.code - 1, f.right.code - 1), _BINARY[type(f)]
    return 1 + 8 * q + tag


def godel_code(f: ObjFormula) -> int:
    return f.code


@lru_cache(maxsize=1 << 16)
def decode(n: int) -> ObjFormula | None:
    """Inverse of :func:`godel_code`; ``None`` for integers below 1."""
    if n < 1:
        return None
    q, tag = divmod(n - 1, 8)
    if tag == TAG_NAMED:
        f = FALSUM if q == 0 else Named(ident_from_index(q - 1))
    elif tag == TAG_S:
        f = SAtom(q + 1)
    elif tag == TAG_F:
        f = FAtom(ident_from_index(q))
    elif tag == TAG_PR:
        c, t = divmod(q, 2)
        f = PRAtom(PR_TAGS[t], c + 1)
    elif tag == TAG_NOT:
        f = Not(decode(q + 1))
    else:
        a, b = _uncantor(q)
        f = _BINARY_BY_TAG[tag](decode(a + 1), decode(b + 1))
    object.__setattr__(f, "_code", n)
    return f


def neg_code(n: int) -> int:
    """Code of the negation of the formula coded by ``n``."""
    if n < 1:
        raise ValueError(f"{n} is not a Gödel number")
    return 1 + 8 * (n - 1) + TAG_NOT


def enumerate_formulas(limit: int) -> list[ObjFormula]:
    """The canonical enumeration up to code ``limit``: ``[decode(1), ..., decode(limit)]``."""
    return [decode(c) for c in range(1, limit + 1)]


def formulas_up_to(m: int) -> frozenset[ObjFormula]:
    """F_m: every formula with code at most m (there are exactly max(m, 0))."""
    return frozenset(enumerate_formulas(m))


def iter_formulas(start: int = 1) -> Iterator[ObjFormula]:
    c = start
    while True:
        yield decode(c)
        c += 1


# --------------------------------------------------------------------------
# helpers


def negations(f: ObjFormula, k: int) -> ObjFormula:
    for _ in range(k):
        f = Not(f)
    return f


def strip_negations(f: ObjFormula) -> tuple[ObjFormula, int]:
    """Remove all leading negations; returns (core, count)."""
    k = 0
    while isinstance(f, Not):
        f = f.arg
        k += 1
    return f, k


def big_or(disjuncts) -> ObjFormula:
    """Right-nested disjunction in the given order (at least one disjunct)."""
    ds = list(disjuncts)
    if not ds:
        raise ValueError("empty disjunction")
    out = ds[-1]
    for d in reversed(ds[:-1]):
        out = Or(d, out)
    return out


def atoms_of(f: ObjFormula) -> set[ObjFormula]:
    out: set[ObjFormula] = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if is_atomic(g):
            out.add(g)
        else:
            stack.extend(g.children())
    return out


# --------------------------------------------------------------------------
# text syntax

_CONNECTIVES = Connectives(neg=Not, conj=And, disj=Or, imp=Imp)


def _number(p: Parser) -> int:
    p.expect("(")
    tok = p.expect("num")
    p.expect(")")
    return int(tok.value)


def _obj_atom(p: Parser) -> ObjFormula:
    tok = p.tok
    if tok.kind == "str":
        p.advance()
        if tok.value != '"0=1"':
            raise ParseError(f"unknown quoted atom {tok.value}", tok.pos, p.text)
        return FALSUM
    if tok.kind != "name":
        p.error(f"unexpected {tok.value!r}")
    p.advance()
    if tok.value == "S":
        n = _number(p)
        if n < 1:
            raise ParseError("S-atoms need n >= 1", tok.pos, p.text)
        return SAtom(n)
    if tok.value == "PR":
        p.expect("[")
        tag = p.expect("name").value
        p.expect("]")
        if tag not in PR_TAGS:
            raise ParseError(f"unknown predicate tag {tag!r}", tok.pos, p.text)
        c = _number(p)
        if c < 1:
            raise ParseError("PR argument must be >= 1", tok.pos, p.text)
        return PRAtom(tag, c)
    if tok.value == "F":
        p.expect("(")
        var = p.expect("name")
        p.expect(")")
        try:
            ident_index(var.value)
        except ValueError:
            raise ParseError(f"invalid variable {var.value!r}", var.pos, p.text) from None
        return FAtom(var.value)
    try:
        ident_index(tok.value)
    except ValueError:
        raise ParseError(f"invalid atom name {tok.value!r}", tok.pos, p.text) from None
    return Named(tok.value)


def parse_obj(text: str) -> ObjFormula:
    """Parse object-language text, e.g. ``'~S(1) | "0=1"'`` or ``"PR[g'](9) -> a"``."""
    return Parser(text, _CONNECTIVES, _obj_atom).parse()


def _show(f: ObjFormula) -> tuple[str, int]:
    if isinstance(f, SAtom):
        return f"S({f.n})", PREC_UNARY
    if isinstance(f, PRAtom):
        return f"PR[{f.tag}]({f.arg})", PREC_UNARY
    if isinstance(f, FAtom):
        return f"F({f.var})", PREC_UNARY
    if isinstance(f, Named):
        return ('"0=1"' if f.name == "0=1" else f.name), PREC_UNARY
    if isinstance(f, Not):
        s, p = _show(f.arg)
        return "~" + wrap(s, p, PREC_UNARY), PREC_UNARY
    (ls, lp), (rs, rp) = _show(f.left), _show(f.right)
    if isinstance(f, And):
        return f"{wrap(ls, lp, PREC_AND)} & {wrap(rs, rp, PREC_UNARY)}", PREC_AND
    if isinstance(f, Or):
        return f"{wrap(ls, lp, PREC_OR)} | {wrap(rs, rp, PREC_AND)}", PREC_OR
    return f"{wrap(ls, lp, PREC_OR)} -> {wrap(rs, rp, PREC_IMP)}", PREC_IMP


def print_obj(f: ObjFormula) -> str:
    return _show(f)[0]
