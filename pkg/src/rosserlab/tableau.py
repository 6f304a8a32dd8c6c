"""Tableau for KD with countermodel extraction and derivation extraction.

Labels are finite sets of modal formulas read conjunctively. A label is
first expanded propositionally (alpha/beta rules, leftmost formula first in
a fixed order) into saturated labels holding only literals, boxes and
negated boxes. A saturated label needs one successor per negated box
``~[]A`` (label ``{~A} + box contents``); with no negated boxes but some
boxes it still needs one successor holding the box contents (seriality);
with neither it gets a reflexive loop.

A closed tableau is turned into a Hilbert derivation of ``~(conjunction of
the label)``: saturated nodes through necessitation and K (plus the D axiom
for the seriality successor), the propositional layers by one tautology
each.
"""

from __future__ import annotations

from collections import deque
from functools import lru_cache
from typing import Iterable, Iterator

from .hilbert import Derivation, conj, imp_chain
from .kripke import KripkeModel
from .modal import BOT, And, Bot, Box, Formula, Imp, Not, Or, Var, print_modal, size

__all__ = ["BudgetExceeded", "KDTableau", "order_key"]


class BudgetExceeded(RuntimeError):
    pass


@lru_cache(maxsize=None)
def order_key(f: Formula) -> tuple[int, str]:
    return size(f), print_modal(f)


def _sorted(label: Iterable[Formula]) -> list[Formula]:
    return sorted(label, key=order_key)


def _is_terminal(f: Formula) -> bool:
    if isinstance(f, (Var, Box, Bot)):
        return True
    return isinstance(f, Not) and isinstance(f.arg, (Var, Box))


def _expand(f: Formula):
    """``('a', parts)`` or ``('b', left, right)`` for a non-terminal formula."""
    if isinstance(f, And):
        return "a", (f.left, f.right)
    if isinstance(f, Or):
        return "b", (f.left,), (f.right,)
    if isinstance(f, Imp):
        return "b", (Not(f.left),), (f.right,)
    g = f.arg  # f is a negation
    if isinstance(g, Not):
        return "a", (g.arg,)
    if isinstance(g, Bot):
        return "a", ()
    if isinstance(g, And):
        return "b", (Not(g.left),), (Not(g.right),)
    if isinstance(g, Or):
        return "a", (Not(g.left), Not(g.right))
    return "a", (g.left, Not(g.right))  # negated implication


def _closed(label: frozenset) -> bool:
    if BOT in label:
        return True
    return any(isinstance(f, Not) and f.arg in label for f in label)


class KDTableau:
    """One tableau session; memo tables are shared across queries."""

    def __init__(self, budget: int | None = None):
        self.budget = budget
        self.steps = 0
        self._sat: dict[frozenset, frozenset | None] = {}
        self._succ: dict[frozenset, list[frozenset]] = {}
        self._modal_ok: dict[frozenset, bool] = {}
        self.derivation = Derivation()
        self._refuted: dict[frozenset, int] = {}

    def _tick(self):
        self.steps += 1
        if self.budget is not None and self.steps > self.budget:
            raise BudgetExceeded(self.steps)

    def saturations(self, label: frozenset) -> Iterator[tuple[frozenset, bool]]:
        """Saturated labels of the propositional expansion, with a closed flag."""
        stack = [label]
        while stack:
            cur = stack.pop()
            self._tick()
            if _closed(cur):
                yield cur, True
                continue
            todo = [f for f in _sorted(cur) if not _is_terminal(f)]
            if not todo:
                yield cur, False
                continue
            f = todo[0]
            rest = cur - {f}
            kind, *parts = _expand(f)
            if kind == "a":
                stack.append(rest | frozenset(parts[0]))
            else:
                stack.append(rest | frozenset(parts[1]))
                stack.append(rest | frozenset(parts[0]))

    @staticmethod
    def _modal_parts(s: frozenset) -> tuple[list[Formula], list[Formula]]:
        boxes = _sorted(f.arg for f in s if isinstance(f, Box))
        dias = _sorted(f.arg.arg for f in s if isinstance(f, Not) and isinstance(f.arg, Box))
        return boxes, dias

    def _children(self, s: frozenset) -> list[frozenset]:
        boxes, dias = self._modal_parts(s)
        if dias:
            return [frozenset(boxes) | {Not(d)} for d in dias]
        if boxes:
            return [frozenset(boxes)]
        return []

    def _check_modal(self, s: frozenset) -> bool:
        got = self._modal_ok.get(s)
        if got is not None:
            return got
        kids = self._children(s)
        succ = []
        ok = True
        for c in kids:
            w = self.sat(c)
            if w is None:
                ok = False
                break
            succ.append(w)
        if ok:
            self._succ[s] = succ if kids else [s]
        self._modal_ok[s] = ok
        return ok

    def sat(self, label: Iterable[Formula]) -> frozenset | None:
        """A saturated, modally satisfiable expansion of the label, or None."""
        label = frozenset(label)
        if label in self._sat:
            return self._sat[label]
        found = None
        for s, closed in self.saturations(label):
            if not closed and self._check_modal(s):
                found = s
                break
        self._sat[label] = found
        return found

    def model(self, root: frozenset) -> KripkeModel:
        """Worlds numbered from 1 in breadth-first order from the root."""
        ids = {root: 1}
        order = [root]
        queue = deque([root])
        while queue:
            s = queue.popleft()
            for t in self._succ[s]:
                if t not in ids:
                    ids[t] = len(ids) + 1
                    order.append(t)
                    queue.append(t)
        rel = {(ids[s], ids[t]) for s in order for t in self._succ[s]}
        val = {ids[s]: {f.name for f in s if isinstance(f, Var)} for s in order}
        return KripkeModel.build(range(1, len(order) + 1), rel, val, 1)

    # ------------------------------------------------------------------
    # derivations

    @staticmethod
    def neg_conj(label: Iterable[Formula]) -> Formula:
        return Not(conj(_sorted(label)))

    def refute(self, label: Iterable[Formula]) -> int:
        """Derivation line proving ``~(conjunction of label)``; the label must be unsatisfiable."""
        label = frozenset(label)
        got = self._refuted.get(label)
        if got is not None:
            return got
        d = self.derivation
        premises = [self._refute_saturated(s) for s, closed in self.saturations(label) if not closed]
        line = d.derive_tc(premises, self.neg_conj(label))
        self._refuted[label] = line
        return line

    def _refute_saturated(self, s: frozenset) -> int:
        got = self._refuted.get(s)
        if got is not None:
            return got
        d = self.derivation
        boxes, dias = self._modal_parts(s)
        line = None
        for dia in dias:
            child = frozenset(boxes) | {Not(dia)}
            if self.sat(child) is None:
                inner = d.derive_tc([self.refute(child)], imp_chain(boxes, dia))
                line = d.derive_tc([d.box_chain(inner, len(boxes))], self.neg_conj(s))
                break
        if line is None:
            if dias or not boxes or self.sat(boxes) is not None:
                raise ValueError("label is satisfiable")
            inner = d.derive_tc([self.refute(boxes)], imp_chain(boxes, BOT))
            line = d.derive_tc([d.box_chain(inner, len(boxes)), d.axiom_d()], self.neg_conj(s))
        self._refuted[s] = line
        return line

    def prove(self, goal: Formula, assumptions: Iterable[int] = ()) -> int:
        """Prove ``goal`` from earlier derivation lines ``assumptions``.

        The tableau is run on ``{~goal} + assumption formulas``; raises
        ``ValueError`` when that label is satisfiable.
        """
        d = self.derivation
        assumptions = list(assumptions)
        label = frozenset([Not(goal), *(d.formula(i) for i in assumptions)])
        if self.sat(label) is not None:
            raise ValueError("goal does not follow")
        return d.derive_tc([self.refute(label), *assumptions], goal)
