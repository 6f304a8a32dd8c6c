import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rosserlab import objlang as ol
from rosserlab.rosser_kdr import (
    closure_candidates,
    closure_faithful,
    closure_threshold,
    compute_Y,
    first_unsat,
    kdr_schema_violations,
    make_closure_faithful,
    run_gprime,
    y_breakpoints,
)
from rosserlab.streams import ProofStream
from rosserlab.suites import gprime_trace_checks

from .conftest import sat_oracle, tc_oracle


def _neg_pr(c):
    return ol.Not(ol.PRAtom("g'", c))


def test_threshold_matches_code():
    assert closure_threshold(1) == 93
    for c in range(1, 30):
        assert closure_threshold(c) == _neg_pr(c).code
    assert [c for c, _ in closure_candidates(92)] == []
    assert [c for c, _ in closure_candidates(93)] == [1]


def test_empty_stream_chain():
    y = compute_Y(ProofStream({}, 300), 300)
    assert y.final == frozenset() and y.sat and y.stabilized_at == 0


def test_chain_adds_refuted_codes():
    # ~S(1) refutes code 2, so ~PR[g'](2) joins once its code fits under m
    s = ProofStream.of({5: "~S(1)"}, 300)
    assert _neg_pr(2) not in compute_Y(s, 220).final
    y = compute_Y(s, 221)
    assert _neg_pr(2) in y.final and y.sat
    assert y.level(0) == frozenset({ol.parse_obj("~S(1)")})
    assert len(y.chain()) == 222


def naive_Y(events, m):
    """Round-by-round closure with the truth-table oracle."""
    cur = {f for s, f in events.items() if s <= m}
    c_max = max([c for c in range(1, m + 1) if closure_threshold(c) <= m], default=0)
    while True:
        new = {_neg_pr(c) for c in range(1, c_max + 1) if tc_oracle(cur, ol.Not(ol.decode(c)))}
        if new <= cur:
            return frozenset(cur)
        cur |= new


_ev = st.dictionaries(
    st.integers(1, 120),
    st.sampled_from(["~S(1)", "S(1)", "~PR[g'](1)", "PR[g'](2)", "a", "~a", "a -> ~S(1)", '"0=1"']),
    max_size=4,
)


@settings(max_examples=40, deadline=None)
@given(_ev, st.integers(0, 240))
def test_Y_matches_naive_closure(ev, m):
    s = ProofStream.of(ev, 240)
    y = compute_Y(s, m)
    expect = naive_Y(s.events, m)
    assert y.final == expect
    assert y.sat == sat_oracle(list(expect))
    assert y.stabilized_at <= m or not y.final


def test_breakpoints_are_lazy_and_sorted():
    s = ProofStream.of({3: "a", 93: "b", 500: "c"}, 10**9)
    it = y_breakpoints(s, 10**9)
    head = [next(it) for _ in range(6)]
    assert head == [0, 3, 93, 221, 349, 477]


def test_direct_contradiction_switches():
    s = ProofStream.of({2: "a", 5: "~a"}, 20)
    assert first_unsat(s, 20) == 5
    tr = run_gprime(s, 40)
    assert tr.switch == 5 and set(tr.X) == {ol.Named("a")}


def test_consistent_stream_copies():
    s = ProofStream.of({2: "a", 8: "b"}, 10)
    tr = run_gprime(s, 10)
    assert tr.switch is None and tr.eval_pr(ol.Named("a")) is True
    with pytest.raises(ValueError):
        run_gprime(s, 50)


def test_closure_alone_causes_switch():
    # the proofs stay consistent; only the added ~PR[g'](2) clashes with PR[g'](2)
    s = ProofStream.of({5: "~S(1)", 300: "PR[g'](2)"}, 400)
    assert s.consistent_at(400)
    assert first_unsat(s, 400) == 300
    rep = gprime_trace_checks(s)
    assert rep["switch"] == 300 and rep["x_satisfiable"]
    assert not rep["mismatches"] and not rep["k_violations"]
    assert not rep["schema_violations"]


def test_schema_boundary_at_switch():
    # X = Y_{m-1} lacks ~PR[g'](2), whose code is exactly m; the literal
    # bound m therefore shows a violation while m-1 is clean
    s = ProofStream.of({5: "~S(1)", 10: "PR[g'](2)"}, 300)
    m = first_unsat(s, 300)
    assert m == 221 == _neg_pr(2).code
    rep = gprime_trace_checks(s)
    assert rep["schema_violations"] == ["S(1)"]
    assert rep["schema_violations_m_minus_1"] == []


def test_schema_default_bound():
    s = ProofStream.of({2: "a", 5: "~a"}, 10)
    tr = run_gprime(s, 200)
    assert kdr_schema_violations(tr) == ([], [])


def test_make_closure_faithful():
    s = ProofStream.of({5: "~S(1)"}, 300)
    assert not closure_faithful(s)
    f = make_closure_faithful(s)
    assert closure_faithful(f)
    assert _neg_pr(2) in f.proofs_up_to(f.horizon)
    assert f.consistent_at(f.horizon) == (first_unsat(f, f.horizon) is None)
