import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rosserlab import objlang as ol
from rosserlab.kripke import KripkeModel, evaluate
from rosserlab.modal import parse_modal
from rosserlab.rosser_kd import (
    CONSISTENT,
    HTrace,
    World,
    WorldAssignment,
    build_M,
    force_scenario,
    horizon_for,
    interpret_f,
    lemma_stream,
    run_g,
    run_h,
    scenario_truth,
)
from rosserlab.streams import ProofStream
from rosserlab.traces import C1, C3

from .conftest import g_outputs_oracle, h_oracle, rosser_oracle

CHAIN = KripkeModel.build([1, 2, 3], [(1, 2), (2, 3), (3, 3)], {3: ["p"]}, 1)
W3 = WorldAssignment.single(CHAIN)
EMPTY = ProofStream({}, 0)


# ------------------------------------------------------------ h


def test_h_quiet_stream():
    s = ProofStream.of({2: "S(1) -> a", 5: "a | b"}, 30)
    ht = run_h(s, W3, 30)
    assert ht.settle_point is None and not ht.values.any()


def test_h_single_refutation():
    s = ProofStream.of({4: "~S(2)"}, 10)
    ht = run_h(s, W3, 10)
    assert ht.settle_point == (4, 2)
    assert ht[5] == 2 and ht[4] == 0


def test_h_tie_breaks_to_least_world():
    s = ProofStream.of({6: "~S(2) & ~S(1)"}, 10)
    assert run_h(s, W3, 10).settle_point == (6, 1)


def test_h_inconsistency_triggers_least_world():
    s = ProofStream.of({2: "a", 3: "~a"}, 10)
    assert run_h(s, W3, 10).settle_point == (3, 1)


def test_h_ignores_unassigned_worlds():
    s = ProofStream.of({2: "~S(9)"}, 10)
    assert run_h(s, W3, 10).settle_point is None


_events = st.dictionaries(
    st.integers(1, 40),
    st.sampled_from(["~S(1)", "~S(2)", "~S(3)", "S(1) -> a", "a", "~a", "a -> ~S(3)", "S(2) | S(3)", "b"]),
    max_size=6,
)


@settings(max_examples=150)
@given(_events)
def test_h_matches_naive_recomputation(ev):
    s = ProofStream.of(ev, 40)
    ht = run_h(s, W3, 40)
    expect = h_oracle(s.events, W3.worlds, 40)
    assert ht.values.tolist() == expect
    assert not ht.invariant_violations()


def test_h_invariant_checker_catches_breakage():
    bad = HTrace(np.array([0, 0, 2, 2, 1]), (1, 2))
    assert "h changes after settling" in bad.invariant_violations()
    assert HTrace(np.array([1, 1]), None).invariant_violations()


# ------------------------------------------------------------ g


def test_g_procedure1_copies_stream():
    s = ProofStream.of({2: "a", 5: "b -> a"}, 20)
    tr = run_g(s, W3, 20)
    assert tr.switch is None
    outs = list(tr.outputs())
    assert [f for _, f, _ in outs] == [s.at(y) for y in range(21)]
    assert all(tag[0] == "P1" for _, _, tag in outs)


def test_g_switch_and_X():
    s = ProofStream.of({3: "a", 7: "~S(2)"}, 10)
    tr = run_g(s, W3, 400)
    assert tr.switch == 7
    assert tr.X == (ol.Named("a"), ol.SAtom(3))
    assert tr.meta["settled_world"] == 2


@pytest.mark.parametrize(
    "ev",
    [{3: "a", 7: "~S(2)"}, {1: "S(3) -> b", 4: "~S(1)"}, {2: "a", 6: "~a"}, {5: "~S(3)", 2: "PR[g](3)"}],
)
def test_g_outputs_match_explicit_oracle(ev):
    s = ProofStream.of(ev, 10)
    H = 900
    tr = run_g(s, W3, H)
    expect = g_outputs_oracle(s.events, list(tr.X), tr.switch, H)
    got = [f for _, f, _ in tr.outputs()]
    assert got == expect
    for c in range(1, 60):
        for f in (ol.decode(c), ol.Not(ol.decode(c))):
            assert tr.eval_pr(f) == rosser_oracle(expect, f)


def test_stage_positions_and_bounds():
    s = ProofStream.of({3: "a", 7: "~S(2)"}, 10)
    tr = run_g(s, W3, 5000)
    m = tr.m
    for k in range(200):
        t = tr.t(k)
        assert k <= t <= k * (m + 1)
        phi = ol.decode(k + 1)
        if tr.case(k) == C1:
            assert tr.stage_output(k, 0) == phi
        if tr.case(k) == C3:
            # m+1 entries, negations descending to phi itself
            assert [tr.stage_output(k, s_) for s_ in range(m + 1)] == [ol.negations(phi, m - s_) for s_ in range(m + 1)]


def test_procedure2_falsum_is_decided_false():
    s = ProofStream.of({3: "a", 7: "~S(2)"}, 10)
    tr = run_g(s, W3, 5000)
    assert tr.x_satisfiable()
    assert tr.eval_pr(ol.FALSUM) is False


def test_run_g_horizon_guard():
    s = ProofStream.of({3: "a"}, 10)
    with pytest.raises(ValueError):
        run_g(s, W3, 50)
    assert run_g(s, W3, 11).p1_complete


# ------------------------------------------------------------ M, scenarios


def test_build_M_components():
    one, w1 = build_M([parse_modal("[]p -> p")])
    assert len(w1.ranges) == 1 and set(w1.ranges[0]) == set(one.worlds)
    two, w2 = build_M([parse_modal("[]p -> p"), parse_modal("[]~p -> []~[]p")])
    assert len(w2.ranges) == 2 and not set(w2.ranges[0]) & set(w2.ranges[1])
    for w in two.worlds:
        assert two.successors(w)
    for A, d in zip(w2.formulas, w2.designated):
        assert not evaluate(two, d, A)
    with pytest.raises(ValueError):
        build_M([parse_modal("~[]bot")])


def test_assignment_validation():
    with pytest.raises(ValueError):
        WorldAssignment(CHAIN, ((1, 2), (2, 3)), (1, 2))
    with pytest.raises(ValueError):
        WorldAssignment.single(KripkeModel.build([1, 2], [(1, 2)], designated=1))


def test_force_scenario_examples():
    s1 = force_scenario(1, W3, EMPTY)
    assert run_h(s1, W3, s1.horizon + 1).settle_point == (1, 1)
    s3 = force_scenario(3, W3, EMPTY)
    assert run_h(s3, W3, s3.horizon + 1).settle_point[1] == 3
    with pytest.raises(ValueError):
        force_scenario(3, W3, ProofStream.of({2: "~S(2)"}, 2))
    with pytest.raises(ValueError):
        force_scenario(8, W3, EMPTY)


def test_interpretation():
    assert interpret_f(parse_modal("bot")) == ol.FALSUM
    fp = ol.FAtom("p")
    assert interpret_f(parse_modal("[]p")) == ol.PRAtom("g", fp.code)
    assert interpret_f(parse_modal("p -> []q")) == ol.Imp(fp, ol.PRAtom("g", ol.FAtom("q").code))


def test_scenario_atoms():
    s = force_scenario(2, W3, EMPTY)
    H = horizon_for(s.steps[-1], ol.neg_code(W3.disjunction(2).code))
    tr = run_g(s, W3, H)
    assert scenario_truth(ol.SAtom(2), World(2), tr, CHAIN) is True
    assert scenario_truth(ol.SAtom(3), World(2), tr, CHAIN) is False
    assert scenario_truth(ol.PRAtom("g", W3.disjunction(2).code), World(2), tr, CHAIN) is True
    assert scenario_truth(ol.FAtom("p"), World(3), tr, CHAIN) is True
    assert scenario_truth(ol.FAtom("p"), World(2), tr, CHAIN) is False
    cons = run_g(ProofStream({}, 10), W3, 10)
    for n in range(1, 6):
        assert scenario_truth(ol.SAtom(n), CONSISTENT, cons, CHAIN) is False
    assert scenario_truth(ol.FAtom("p"), CONSISTENT, cons, CHAIN) is False
    with pytest.raises(ValueError):
        scenario_truth(ol.Named("a"), CONSISTENT, cons, CHAIN)
    with pytest.raises(ValueError):
        scenario_truth(ol.PRAtom("g'", 3), CONSISTENT, cons, CHAIN)
    with pytest.raises(ValueError):
        World(0)


def test_unknown_propagates():
    s = force_scenario(2, W3, EMPTY)
    tr = run_g(s, W3, s.horizon + 3)
    big = ol.PRAtom("g", 10**6)
    assert scenario_truth(big, World(2), tr, CHAIN) is None
    assert scenario_truth(ol.Or(ol.SAtom(2), big), World(2), tr, CHAIN) is None


def test_lemma_stream_is_quiet_and_consistent():
    corpus = [parse_modal(t) for t in ("[]p -> p", "[]~p -> []~[]p", "~[]bot")]
    M, W = build_M(corpus[:2])
    base = lemma_stream(W, corpus, pad=7)
    assert base.steps[0] == 8
    assert run_h(base, W, base.horizon).settle_point is None
    assert base.consistent_at(base.horizon)
