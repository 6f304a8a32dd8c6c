import threading

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rosserlab import objlang as ol
from rosserlab.modal import parse_modal
from rosserlab.prop import (
    FALSUM,
    AtomTable,
    Entailment,
    PNot,
    POr,
    PVar,
    is_prop_satisfiable,
    is_tautology,
    is_tc,
    translate_I,
)

from .conftest import sat_oracle, tc_oracle
from .strategies import small_obj

S1 = ol.SAtom(1)
BOT = ol.FALSUM  # the atom "0=1"


def test_translation_is_homomorphic():
    t = AtomTable()
    assert translate_I(S1, t) == PVar(t.id(S1))
    f = ol.Or(ol.Not(S1), BOT)
    assert translate_I(f, t) == POr(PNot(PVar(t.id(S1))), PVar(t.id(BOT)))
    pr = ol.PRAtom("g", 9)
    assert translate_I(pr, t) == PVar(t.id(pr))


def test_atom_table_is_injective_and_stable():
    t = AtomTable()
    atoms = [ol.SAtom(1), ol.SAtom(2), ol.PRAtom("g", 2), ol.PRAtom("g'", 2), ol.FAtom("p"), ol.Named("p")]
    ids = [t.id(a) for a in atoms]
    assert len(set(ids)) == len(atoms)
    assert [t.id(a) for a in atoms] == ids
    assert [t.atom(i) for i in ids] == atoms


def test_atom_table_concurrent_registration():
    t = AtomTable()
    atoms = [ol.SAtom(n) for n in range(1, 200)]

    def work():
        for a in atoms:
            t.id(a)

    threads = [threading.Thread(target=work) for _ in range(4)]
    for th in threads:
        th.start()
    for th in threads:
        th.join()
    assert len(t) == len(atoms)
    assert sorted(t.id(a) for a in atoms) == list(range(1, len(atoms) + 1))


def test_satisfiability_examples():
    assert is_prop_satisfiable([])
    assert not is_prop_satisfiable([S1, ol.Not(S1)])
    assert is_prop_satisfiable([ol.Imp(S1, BOT), ol.Not(BOT)])


def test_tc_examples():
    phi, psi = ol.Named("a"), ol.Named("b")
    assert is_tc([ol.Imp(phi, psi), phi], psi)
    assert is_tc([], ol.Or(phi, ol.Not(phi)))
    # 0=1 is an atom here: it is not refutable without premises
    assert not is_tc([], ol.Not(BOT))


@settings(max_examples=400)
@given(st.lists(small_obj, max_size=4), small_obj)
def test_tc_matches_truth_tables(X, psi):
    assert is_tc(X, psi) == tc_oracle(X, psi)
    assert is_prop_satisfiable(X) == sat_oracle(X)


@given(st.lists(small_obj, min_size=1, max_size=4))
def test_membership(X):
    for f in X:
        assert is_tc(X, f)


@given(st.lists(small_obj, max_size=3), small_obj, small_obj)
def test_cut(X, phi, psi):
    if is_tc(X, phi) and is_tc([*X, phi], psi):
        assert is_tc(X, psi)


@settings(max_examples=200)
@given(st.lists(st.tuples(st.booleans(), small_obj), max_size=12))
def test_incremental_session_matches_fresh_oracle(ops):
    """Interleaved adds and queries: the cached counter-models never give a wrong answer."""
    X = []
    with Entailment() as e:
        for is_add, f in ops:
            if is_add:
                e.add(f)
                X.append(f)
            else:
                assert e.entails(f) == tc_oracle(X, f)
                assert e.consistent_with(f) == sat_oracle([*X, f])
        assert e.satisfiable == sat_oracle(X)


def test_unsatisfiable_premises_entail_everything():
    with Entailment([S1, ol.Not(S1)]) as e:
        assert e.entails(ol.Named("zzz"))
        assert not e.consistent_with(ol.Named("zzz"))
        assert e.model_atoms() is None


def test_model_atoms_satisfy_premises():
    t = AtomTable()
    X = [ol.Imp(S1, ol.SAtom(2)), S1]
    with Entailment(X, t) as e:
        m = e.model_atoms()
    assert m[t.id(S1)] and m[t.id(ol.SAtom(2))]


def test_deep_negation_chains():
    f = ol.negations(S1, 3000)
    assert is_tc([S1], f)
    assert not is_tc([S1], ol.Not(f))


def test_tautology_both_paths():
    assert is_tautology(parse_modal("[]p -> []p"))
    assert not is_tautology(parse_modal("[]p -> p"))
    assert is_tautology(PNot(FALSUM))
    # wide enough to go past the truth-table width and onto the solver
    wide = " & ".join(f"x{i}" for i in range(20))
    assert is_tautology(parse_modal(f"({wide}) -> x7"))
    assert not is_tautology(parse_modal(f"({wide}) -> y"))


def test_rejects_foreign_objects():
    with pytest.raises(TypeError):
        is_tc([], 42)
