"""Hypothesis strategies for modal and object-language formulas."""

from hypothesis import strategies as st

from rosserlab import modal
from rosserlab import objlang as ol

modal_vars = st.sampled_from(["p", "q", "r"]).map(modal.Var)

modal_formulas = st.recursive(
    st.one_of(modal_vars, st.just(modal.BOT)),
    lambda sub: st.one_of(
        sub.map(modal.Not),
        sub.map(modal.Box),
        st.tuples(sub, sub).map(lambda t: modal.And(*t)),
        st.tuples(sub, sub).map(lambda t: modal.Or(*t)),
        st.tuples(sub, sub).map(lambda t: modal.Imp(*t)),
    ),
    max_leaves=6,
)

names = st.from_regex(r"[a-z][a-z0-9_]{0,3}", fullmatch=True)

obj_atoms = st.one_of(
    st.integers(1, 50).map(ol.SAtom),
    st.tuples(st.sampled_from(ol.PR_TAGS), st.integers(1, 400)).map(lambda t: ol.PRAtom(*t)),
    names.map(ol.FAtom),
    names.map(ol.Named),
    st.just(ol.FALSUM),
)

obj_formulas = st.recursive(
    obj_atoms,
    lambda sub: st.one_of(
        sub.map(ol.Not),
        st.tuples(sub, sub).map(lambda t: ol.And(*t)),
        st.tuples(sub, sub).map(lambda t: ol.Or(*t)),
        st.tuples(sub, sub).map(lambda t: ol.Imp(*t)),
    ),
    max_leaves=6,
)

small_atoms = st.sampled_from(
    [ol.SAtom(1), ol.SAtom(2), ol.Named("a"), ol.Named("b"), ol.FAtom("p"), ol.FALSUM]
)

small_obj = st.recursive(
    small_atoms,
    lambda sub: st.one_of(
        sub.map(ol.Not),
        st.tuples(sub, sub).map(lambda t: ol.And(*t)),
        st.tuples(sub, sub).map(lambda t: ol.Or(*t)),
        st.tuples(sub, sub).map(lambda t: ol.Imp(*t)),
    ),
    max_leaves=5,
)
