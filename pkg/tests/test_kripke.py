import itertools

import pytest
from hypothesis import given, settings

from rosserlab.kripke import (
    KripkeFrame,
    KripkeModel,
    disjoint_union,
    evaluate,
    extend_with_root,
    frame_properties,
    frame_validity,
    frames_on,
    model_from_json,
    model_to_json,
    truth_set,
)
from rosserlab.modal import parse_modal

from .conftest import all_frames, condition_r, holds, serial
from .strategies import modal_formulas

R_AXIOM = parse_modal("[]~p -> []~[]p")


def test_sample_model(sample_model):
    assert evaluate(sample_model, 1, parse_modal("[]p"))
    assert not evaluate(sample_model, 1, parse_modal("[]p -> p"))
    for w in sample_model.worlds:
        assert evaluate(sample_model, w, parse_modal("~[]bot"))


def test_unknown_world(sample_model):
    with pytest.raises(KeyError):
        evaluate(sample_model, 7, parse_modal("p"))


def _succ(model):
    return {w: list(model.successors(w)) for w in model.worlds}


@settings(max_examples=300)
@given(modal_formulas)
def test_truth_set_matches_clause_oracle(f):
    m = KripkeModel.build([1, 2, 3], [(1, 2), (2, 3), (3, 3), (1, 3)], {1: ["q"], 2: ["p"], 3: ["p", "r"]})
    expect = {w for w in m.worlds if holds(_succ(m), m.val, w, f)}
    assert truth_set(m, f) == expect


@pytest.mark.parametrize(
    "worlds, rel, expect",
    [
        ([1], [(1, 1)], (True, True)),
        ([1, 2], [(1, 2)], (False, False)),
        ([1, 2], [(1, 2), (2, 1)], (True, False)),
    ],
)
def test_frame_properties(worlds, rel, expect):
    assert tuple(frame_properties(KripkeFrame(tuple(worlds), frozenset(rel)))) == expect


def test_frame_properties_match_oracle_on_three_worlds():
    for fr in frames_on(3):
        succ = {w - 1: [y - 1 for y in fr.successors[w]] for w in fr.worlds}
        props = frame_properties(fr)
        assert props.serial == serial(succ)
        assert props.condition_r == condition_r(succ)


def test_frame_validity_examples():
    point = KripkeFrame((1,), frozenset({(1, 1)}))
    swap = KripkeFrame((1, 2), frozenset({(1, 2), (2, 1)}))
    assert frame_validity(point, R_AXIOM)
    assert not frame_validity(swap, R_AXIOM)
    assert frame_validity(swap, parse_modal("p | ~p"))


def test_frame_validity_matches_valuation_enumeration():
    f = parse_modal("[]p -> [][]p")
    for n in (1, 2):
        for succ in all_frames(n):
            fr = KripkeFrame(tuple(range(n)), frozenset((x, y) for x in succ for y in succ[x]))
            expect = all(
                holds(succ, {w: ({"p"} if bits[w] else set()) for w in range(n)}, w, f)
                for bits in itertools.product((0, 1), repeat=n)
                for w in range(n)
            )
            assert frame_validity(fr, f) == expect


def test_frames_on_counts():
    assert [len(frames_on(n)) for n in (1, 2, 3)] == [2, 16, 512]


def test_disjoint_union():
    a = KripkeModel.build([1, 2], [(1, 2), (2, 2)], {2: ["p"]}, 1)
    b = KripkeModel.build([1, 2, 3], [(1, 2), (2, 3), (3, 3)], {3: ["q"]}, 1)
    u, ren = disjoint_union([a, b])
    assert u.worlds == (1, 2, 3, 4, 5)
    assert len(u.rel) == len(a.rel) + len(b.rel)
    assert frame_properties(u.frame).serial
    for part, r in zip((a, b), ren):
        for w in part.worlds:
            for f in ("p", "q", "[]p", "[][]q", "[]~p -> []~[]p"):
                assert evaluate(part, w, parse_modal(f)) == evaluate(u, r[w], parse_modal(f))
    single, _ = disjoint_union([a])
    assert single.rel == a.rel


def test_extend_with_root():
    point = KripkeModel.build([1], [(1, 1)])
    ext = extend_with_root(point)
    assert ext.worlds == (0, 1)
    assert ext.rel == frozenset({(0, 1), (1, 1)})
    assert ext.designated == 0


def test_extend_with_root_preserves_kdr():
    count = 0
    for fr in frames_on(3):
        if not frame_properties(fr).kdr:
            continue
        count += 1
        ext = extend_with_root(KripkeModel(fr, {1: frozenset({"p"})}), ["q"])
        assert frame_properties(ext.frame).kdr
        assert ext.val[0] == frozenset({"p", "q"})
    assert count > 0


def test_model_json_roundtrip(sample_model):
    text = model_to_json(sample_model)
    assert text == '{"designated": 1, "rel": [[1, 2], [2, 2]], "val": {"2": ["p"]}, "worlds": [1, 2]}'
    assert model_from_json(text) == sample_model


@pytest.mark.parametrize(
    "text",
    ['{"rel": []}', '{"worlds": [1], "rel": [[1, 5]]}', '{"worlds": [1], "designated": 3}', '{"worlds": []}'],
)
def test_bad_models(text):
    with pytest.raises(ValueError):
        model_from_json(text)
