import pytest
from hypothesis import given, settings

from rosserlab import objlang as ol
from rosserlab.objlang import ParseError

from .strategies import obj_formulas


def test_zero_is_not_a_code():
    assert ol.decode(0) is None
    assert ol.decode(-3) is None


def test_s_atom_code_exceeds_argument():
    assert ol.SAtom(5).code > 5


def test_closed_forms():
    # code = 1 + 8q + tag with PR[g'](c) at q = 2c - 1, tag 3
    for c in range(1, 40):
        assert ol.PRAtom("g'", c).code == 16 * c - 4
        assert ol.Not(ol.PRAtom("g'", c)).code == 128 * c - 35
    assert ol.SAtom(1).code == 2
    assert ol.FALSUM.code == 1


def test_neg_code():
    f = ol.parse_obj("S(3) -> F(p)")
    assert ol.neg_code(f.code) == ol.Not(f).code
    assert ol.neg_code(ol.neg_code(f.code)) == ol.Not(ol.Not(f)).code != f.code
    with pytest.raises(ValueError):
        ol.neg_code(0)


@settings(max_examples=2000)
@given(obj_formulas)
def test_numbering_roundtrip_and_monotone(f):
    assert ol.decode(f.code) == f
    stack = [f]
    while stack:
        g = stack.pop()
        kids = [] if ol.is_atomic(g) else [g.arg] if isinstance(g, ol.Not) else [g.left, g.right]
        for k in kids:
            assert k.code < g.code
        stack += kids
    if isinstance(f, ol.SAtom):
        assert f.code > f.n
    if isinstance(f, ol.PRAtom):
        assert f.code > f.arg


def test_every_code_decodes_uniquely():
    seen = set()
    for c in range(1, 5001):
        f = ol.decode(c)
        assert f.code == c
        seen.add(f)
    assert len(seen) == 5000


def test_enumeration():
    fs = ol.enumerate_formulas(300)
    codes = [f.code for f in fs]
    assert codes == sorted(codes) == list(range(1, 301))
    assert ol.enumerate_formulas(0) == []
    index = {f: i for i, f in enumerate(fs)}
    for f in fs:
        if isinstance(f, ol.Not) and f.arg in index:
            assert index[f.arg] <= index[f]


def test_formulas_up_to():
    assert ol.formulas_up_to(0) == frozenset()
    assert len(ol.formulas_up_to(250)) <= 250
    f = ol.parse_obj("~S(2) | PR[g](7)")
    assert f in ol.formulas_up_to(f.code)
    assert f not in ol.formulas_up_to(f.code - 1)


@given(obj_formulas)
def test_print_parse_roundtrip(f):
    assert ol.parse_obj(ol.print_obj(f)) == f


def test_text_forms():
    assert ol.parse_obj('~"0=1"') == ol.Not(ol.FALSUM)
    assert ol.parse_obj("PR[g'](12)") == ol.PRAtom("g'", 12)
    assert ol.parse_obj("F(p) & alpha") == ol.And(ol.FAtom("p"), ol.Named("alpha"))


@pytest.mark.parametrize("bad", ["S(0)", "PR[h](3)", "PR[g](0)", "S(", "~", '"1=2"', "F(P)"])
def test_bad_text(bad):
    with pytest.raises((ParseError, ValueError)):
        ol.parse_obj(bad)


def test_big_or_is_right_nested():
    d = ol.big_or([ol.SAtom(1), ol.SAtom(2), ol.SAtom(3)])
    assert d == ol.Or(ol.SAtom(1), ol.Or(ol.SAtom(2), ol.SAtom(3)))
    with pytest.raises(ValueError):
        ol.big_or([])


def test_negation_helpers():
    f = ol.negations(ol.SAtom(1), 4)
    assert ol.strip_negations(f) == (ol.SAtom(1), 4)
