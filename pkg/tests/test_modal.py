import pytest
from hypothesis import given

from rosserlab.modal import (
    BOT,
    And,
    Box,
    Imp,
    Not,
    ParseError,
    Var,
    diamond,
    modal_depth,
    parse_modal,
    print_modal,
    size,
    subformulas,
    substitute,
    variables,
)

from .strategies import modal_formulas

p, q, r = Var("p"), Var("q"), Var("r")


def test_parse_reference_shapes():
    assert parse_modal("[]~p -> []~[]p") == Imp(Box(Not(p)), Box(Not(Box(p))))
    assert parse_modal("~[]bot") == Not(Box(BOT))
    assert parse_modal("p") == p


def test_implication_is_right_associative():
    assert parse_modal("p -> q -> r") == Imp(p, Imp(q, r))


def test_diamond_is_sugar():
    assert parse_modal("<>p") == diamond(p) == Not(Box(Not(p)))


def test_precedence():
    assert parse_modal("~p & q | r") == parse_modal("((~p) & q) | r")


@pytest.mark.parametrize("bad", ["((", "p ->", "[]", "P", "p q", "p & & q", ""])
def test_parse_errors_carry_position(bad):
    with pytest.raises(ParseError) as err:
        parse_modal(bad)
    assert err.value.pos >= 0


@given(modal_formulas)
def test_print_parse_roundtrip(f):
    assert parse_modal(print_modal(f)) == f


@given(modal_formulas)
def test_subformulas_closed_and_children_first(f):
    subs = subformulas(f)
    assert subs[-1] == f
    index = {g: i for i, g in enumerate(subs)}
    for g in subs:
        for c in g.children():
            assert index[c] < index[g]


def test_subformula_examples():
    assert set(subformulas(Box(Imp(p, q)))) == {p, q, Imp(p, q), Box(Imp(p, q))}
    assert subformulas(BOT) == [BOT]
    assert subformulas(Not(Not(p))) == [p, Not(p), Not(Not(p))]


def test_substitution():
    axiom = parse_modal("[]~p -> []~[]p")
    qr = And(q, r)
    assert substitute(axiom, {"p": qr}) == Imp(Box(Not(qr)), Box(Not(Box(qr))))
    assert substitute(p, {"p": BOT}) == BOT
    assert substitute(Box(p), {"q": r}) == Box(p)


def test_measures():
    f = parse_modal("[](p -> []q) & r")
    assert modal_depth(f) == 2
    assert size(f) == 7
    assert variables(f) == ["p", "q", "r"]


def test_nodes_are_hashable_and_structural():
    assert hash(parse_modal("[]p")) == hash(Box(Var("p")))
    assert len({parse_modal("p & q"), And(p, q)}) == 1
