"""Propositional view of formulas: the I-translation, satisfiability, t.c.

Every propositionally atomic formula gets its own variable, registered in an
append-only :class:`AtomTable`; connectives translate homomorphically. The
satisfiability core is an incremental CDCL solver from ``python-sat``; an
:class:`Entailment` keeps one solver per premise set so repeated t.c.
queries against the same set only pay for the query formula.
"""

from __future__ import annotations

import threading
from dataclasses import field
from typing import Iterable

from pysat.solvers import Solver

from . import kernels
from . import modal
from . import objlang as ol
from ._tree import hashed_node

__all__ = [
    "PropFormula",
    "PVar",
    "PNot",
    "PAnd",
    "POr",
    "PImp",
    "Falsum",
    "FALSUM",
    "AtomTable",
    "DEFAULT_TABLE",
    "translate_I",
    "translate_modal",
    "Entailment",
    "is_prop_satisfiable",
    "is_tc",
    "prop_atoms",
    "is_tautology",
    "prop_program",
]

SOLVER = "m22"
MODEL_CACHE = 8
# above this many atoms a tautology check goes to the SAT solver instead
TABLE_ATOMS = 16


class PropFormula:
    __slots__ = ()

    def children(self):
        return ()


@hashed_node
class PVar(PropFormula):
    id: int
    _h: int = field(default=0, init=False, compare=False)


@hashed_node
class Falsum(PropFormula):
    _h: int = field(default=0, init=False, compare=False)


@hashed_node
class PNot(PropFormula):
    arg: PropFormula
    _h: int = field(default=0, init=False, compare=False)

    def children(self):
        return (self.arg,)


@hashed_node
class PAnd(PropFormula):
    left: PropFormula
    right: PropFormula
    _h: int = field(default=0, init=False, compare=False)

    def children(self):
        return (self.left, self.right)


@hashed_node
class POr(PropFormula):
    left: PropFormula
    right: PropFormula
    _h: int = field(default=0, init=False, compare=False)

    def children(self):
        return (self.left, self.right)


@hashed_node
class PImp(PropFormula):
    left: PropFormula
    right: PropFormula
    _h: int = field(default=0, init=False, compare=False)

    def children(self):
        return (self.left, self.right)


FALSUM = Falsum()


class AtomTable:
    """Append-only injection from atomic formulas to variable ids (from 1)."""

    def __init__(self):
        self._ids: dict[object, int] = {}
        self._atoms: list[object] = []
        self._lock = threading.Lock()

    def id(self, atom) -> int:
        i = self._ids.get(atom)
        if i is None:
            with self._lock:
                i = self._ids.get(atom)
                if i is None:
                    self._atoms.append(atom)
                    i = self._ids[atom] = len(self._atoms)
        return i

    def atom(self, i: int):
        return self._atoms[i - 1]

    def __len__(self):
        return len(self._atoms)


DEFAULT_TABLE = AtomTable()

_OBJ_BIN = {ol.And: PAnd, ol.Or: POr, ol.Imp: PImp}
_MODAL_BIN = {modal.And: PAnd, modal.Or: POr, modal.Imp: PImp}


def translate_I(f: ol.ObjFormula, table: AtomTable = DEFAULT_TABLE) -> PropFormula:
    """The I-translation: atoms to their variables, connectives homomorphically."""
    if ol.is_atomic(f):
        return PVar(table.id(f))
    if isinstance(f, ol.Not):
        return PNot(translate_I(f.arg, table))
    return _OBJ_BIN[type(f)](translate_I(f.left, table), translate_I(f.right, table))


def translate_modal(f: modal.Formula, table: AtomTable = DEFAULT_TABLE) -> PropFormula:
    """Propositional skeleton of a modal formula: variables and boxed subformulas are atoms."""
    if isinstance(f, (modal.Var, modal.Box)):
        return PVar(table.id(f))
    if isinstance(f, modal.Bot):
        return FALSUM
    if isinstance(f, modal.Not):
        return PNot(translate_modal(f.arg, table))
    return _MODAL_BIN[type(f)](translate_modal(f.left, table), translate_modal(f.right, table))


def _to_prop(x, table: AtomTable) -> PropFormula:
    if isinstance(x, PropFormula):
        return x
    if isinstance(x, ol.ObjFormula):
        return translate_I(x, table)
    if isinstance(x, modal.Formula):
        return translate_modal(x, table)
    raise TypeError(f"cannot translate {x!r}")


def prop_atoms(p: PropFormula) -> set[int]:
    out = set()
    stack = [p]
    while stack:
        g = stack.pop()
        if isinstance(g, PVar):
            out.add(g.id)
        else:
            stack.extend(g.children())
    return out


class Entailment:
    """A growing premise set with incremental satisfiability and t.c. queries.

    Items may be object-language formulas, modal formulas (read through
    :func:`translate_modal`) or ready-made propositional formulas.
    """

    def __init__(self, premises: Iterable = (), table: AtomTable = DEFAULT_TABLE):
        self.table = table
        self._solver = Solver(name=SOLVER)
        self._nvars = 0
        self._atom_var: dict[int, int] = {}
        self._node_lit: dict[PropFormula, int] = {}
        self._false: int | None = None
        self._sat: bool | None = True
        self._models: list[dict[int, bool]] = []
        self._masks: dict = {}
        self._obj_lit: dict = {}
        self.premises: list = []
        for x in premises:
            self.add(x)

    def close(self):
        self._solver.delete()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()

    def __del__(self):
        try:
            self._solver.delete()
        except Exception:
            pass

    def _fresh(self) -> int:
        self._nvars += 1
        return self._nvars

    def _literal(self, p: PropFormula) -> int:
        lit = self._node_lit.get(p)
        if lit is not None:
            return lit
        add = self._solver.add_clause
        if isinstance(p, PVar):
            lit = self._atom_var.get(p.id)
            if lit is None:
                lit = self._atom_var[p.id] = self._fresh()
        elif isinstance(p, Falsum):
            if self._false is None:
                self._false = self._fresh()
                add([-self._false])
            lit = self._false
        elif isinstance(p, PNot):
            lit = -self._literal(p.arg)
        else:
            lit = self._gate(type(p), self._literal(p.left), self._literal(p.right))
        self._node_lit[p] = lit
        return lit

    def _gate(self, kind, a: int, b: int) -> int:
        """Tseitin variable for ``a kind b``."""
        add = self._solver.add_clause
        lit = self._fresh()
        if kind is PAnd:
            add([-lit, a])
            add([-lit, b])
            add([lit, -a, -b])
        elif kind is POr:
            add([-lit, a, b])
            add([lit, -a])
            add([lit, -b])
        else:
            add([-lit, -a, b])
            add([lit, a])
            add([lit, -b])
        return lit

    def _obj_literal(self, f) -> int:
        """Literal for an object formula, skipping the intermediate propositional tree."""
        sign = 1
        while isinstance(f, ol.Not):
            f, sign = f.arg, -sign
        lit = self._obj_lit.get(f)
        if lit is None:
            if ol.is_atomic(f):
                lit = self._literal(PVar(self.table.id(f)))
            else:
                lit = self._gate(_OBJ_BIN[type(f)], self._obj_literal(f.left), self._obj_literal(f.right))
            self._obj_lit[f] = lit
        return sign * lit

    def _lit(self, x) -> int:
        if isinstance(x, ol.ObjFormula):
            return self._obj_literal(x)
        return self._literal(_to_prop(x, self.table))

    def add(self, x) -> None:
        self.premises.append(x)
        self._solver.add_clause([self._lit(x)])
        self._models.clear()
        self._masks.clear()
        if self._sat:
            self._sat = None

    @property
    def satisfiable(self) -> bool:
        if self._sat is None:
            self._sat = self._solver.solve()
        return self._sat

    def entails(self, x) -> bool:
        """``x`` is a tautological consequence of the premises."""
        if not self.satisfiable:
            return True
        # a premise model that falsifies x settles the query without a solver call
        mask = self._truth_mask(x) if self._models else None
        if mask is not None and mask != (1 << len(self._models)) - 1:
            return False
        lit = self._lit(x)
        if self._solver.solve(assumptions=[-lit]):
            self._remember_model()
            return False
        return True

    def consistent_with(self, x) -> bool:
        """premises ∪ {x} is satisfiable."""
        if not self.satisfiable:
            return False
        if self._models and self._truth_mask(x):
            return True
        lit = self._lit(x)
        if self._solver.solve(assumptions=[lit]):
            self._remember_model()
            return True
        return False

    def _remember_model(self) -> None:
        if len(self._models) >= MODEL_CACHE:
            return
        model = set(self._solver.get_model() or ())
        self._models.append({aid: v in model for aid, v in self._atom_var.items()})
        self._masks.clear()

    def _truth_mask(self, x) -> int | None:
        """Bit i is set when x holds in cached model i; ``None`` for non-object inputs.

        Atoms a model never assigned count as false: those atoms are
        unconstrained by the premises, so the model extends that way.
        """
        if not isinstance(x, ol.ObjFormula):
            return None
        full = (1 << len(self._models)) - 1
        memo = self._masks
        ids = self.table._ids
        models = self._models

        def ev(f) -> int:
            flip = False
            while isinstance(f, ol.Not):
                f, flip = f.arg, not flip
            r = memo.get(f)
            if r is None:
                if ol.is_atomic(f):
                    i = ids.get(f)
                    r = 0
                    if i is not None:
                        for b, mdl in enumerate(models):
                            if mdl.get(i, False):
                                r |= 1 << b
                else:
                    a, c = ev(f.left), ev(f.right)
                    if isinstance(f, ol.And):
                        r = a & c
                    elif isinstance(f, ol.Or):
                        r = a | c
                    else:
                        r = (full & ~a) | c
                memo[f] = r
            return (full & ~r) if flip else r

        return ev(x)

    def model_atoms(self) -> dict[int, bool] | None:
        """A satisfying assignment restricted to atom ids, or None."""
        if not self.satisfiable:
            return None
        self._solver.solve()
        model = set(self._solver.get_model() or ())
        return {aid: v in model for aid, v in self._atom_var.items()}


def is_prop_satisfiable(X: Iterable, table: AtomTable = DEFAULT_TABLE) -> bool:
    with Entailment(X, table) as e:
        return e.satisfiable


def is_tc(X: Iterable, psi, table: AtomTable = DEFAULT_TABLE) -> bool:
    """``psi`` is a tautological consequence of ``X`` (``I(X) ∪ {¬I(psi)}`` unsatisfiable)."""
    with Entailment(X, table) as e:
        return e.entails(psi)


def prop_program(p: PropFormula, atom_order: dict[int, int]):
    """Postfix program for the truth-table kernel; ``atom_order`` maps atom id -> column."""

    def leaf(g):
        if isinstance(g, PVar):
            return kernels.OP_VAR, atom_order[g.id]
        if isinstance(g, Falsum):
            return kernels.OP_BOT, 0
        return None

    def unary(g):
        if isinstance(g, PNot):
            return kernels.OP_NOT, (g.arg,)
        return None

    def binary(g):
        op = {PAnd: kernels.OP_AND, POr: kernels.OP_OR, PImp: kernels.OP_IMP}[type(g)]
        return op, (g.left, g.right)

    return kernels.compile_postfix(p, leaf, unary, binary)


def is_tautology(x, table: AtomTable = DEFAULT_TABLE) -> bool:
    """Truth-table check (bit-parallel kernel); falls back to SAT past the kernel's width."""
    p = _to_prop(x, table)
    atoms = sorted(prop_atoms(p))
    if len(atoms) > TABLE_ATOMS:
        with Entailment((), table) as e:
            return e.entails(p)
    ops, args = prop_program(p, {a: i for i, a in enumerate(atoms)})
    return kernels.falsifying_row(ops, args, len(atoms)) < 0
