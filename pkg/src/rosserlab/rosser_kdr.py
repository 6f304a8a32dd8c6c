"""The KDR construction: the closure sets Y_m^i and the enumerator g'.

``Y_m^0`` is the set of proofs up to step m. Each round adds
``~PR[g'](c)`` for every code ``c`` whose formula's negation is a t.c. of
the previous round, provided the new formula's own code is at most m.
g' copies the stream while every ``Y_m`` is satisfiable and switches to the
staged enumeration against ``X = Y_{m-1}`` at the first unsatisfiable one.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass
from typing import Iterator

from . import objlang as ol
from .prop import Entailment
from .streams import ProofStream
from .traces import EnumTrace

__all__ = [
    "YChain",
    "compute_Y",
    "closure_candidates",
    "closure_threshold",
    "run_gprime",
    "y_breakpoints",
    "closure_faithful",
    "make_closure_faithful",
    "kdr_schema_violations",
]

TAG = "g'"


def closure_threshold(c: int) -> int:
    """Code of ``~PR[g'](c)``: the least m whose F_m contains it."""
    return ol.neg_code(ol.PRAtom(TAG, c).code)


def closure_candidates(m: int) -> list[tuple[int, ol.ObjFormula]]:
    """``(c, ~PR[g'](c))`` for every c with the closure formula inside F_m."""
    out = []
    c = 1
    while closure_threshold(c) <= m:
        out.append((c, ol.Not(ol.PRAtom(TAG, c))))
        c += 1
    return out


@dataclass(frozen=True)
class YChain:
    """``Y_m^0 ⊆ Y_m^1 ⊆ ...``; ``levels`` stores rounds up to the first repeat."""

    m: int
    levels: tuple[frozenset[ol.ObjFormula], ...]
    sat: bool

    @property
    def stabilized_at(self) -> int:
        return len(self.levels) - 1

    def level(self, i: int) -> frozenset[ol.ObjFormula]:
        return self.levels[min(i, len(self.levels) - 1)]

    @property
    def final(self) -> frozenset[ol.ObjFormula]:
        return self.levels[-1]

    def chain(self) -> list[frozenset[ol.ObjFormula]]:
        """The full chain ``Y_m^0 .. Y_m^m``."""
        return [self.level(i) for i in range(self.m + 1)]

    def ordered(self, stream: ProofStream) -> list[ol.ObjFormula]:
        """Elements in a reproducible order: proofs by step, then closure formulas by code."""
        base = stream.ordered_up_to(self.m)
        extra = sorted(self.final - set(base), key=lambda f: f.code)
        return base + extra


def compute_Y(stream: ProofStream, m: int) -> YChain:
    """Exact fixpoint iteration of the Y_m chain (one extra round confirms stability)."""
    if m > stream.horizon:
        raise ValueError(f"m={m} is beyond the horizon {stream.horizon}")
    base = stream.ordered_up_to(m)
    cands = closure_candidates(m)
    levels = [frozenset(base)]
    with Entailment(base) as e:
        while True:
            cur = levels[-1]
            new = [f for c, f in cands if f not in cur and e.entails(ol.Not(ol.decode(c)))]
            if not new:
                break
            for f in new:
                e.add(f)
            levels.append(cur | frozenset(new))
        sat = e.satisfiable
    return YChain(m, tuple(levels), sat)


def y_breakpoints(stream: ProofStream, H: int) -> Iterator[int]:
    """Values of m <= H at which Y_m can change: 0, proof steps and closure thresholds.

    Lazy and increasing, so callers that stop early never touch the tail of
    a large H.
    """
    steps = iter(stream.steps_up_to(H))
    thresholds = (t for t in map(closure_threshold, itertools.count(1)))
    merged = heapq.merge(steps, itertools.takewhile(lambda t: t <= H, thresholds))
    last = 0
    yield 0
    for p in merged:
        if p != last:
            last = p
            yield p


def first_unsat(stream: ProofStream, H: int) -> int | None:
    """Least m <= H with Y_m unsatisfiable (Y_m only grows with m)."""
    for m in y_breakpoints(stream, H):
        if not compute_Y(stream, m).sat:
            return m
    return None


def run_gprime(stream: ProofStream, H: int) -> EnumTrace:
    """g' up to position H (beyond the stream horizon only after the switch)."""
    m = first_unsat(stream, min(H, stream.horizon))
    if m is None:
        if H > stream.horizon + 1:
            raise ValueError(f"H={H} needs proofs beyond the stream horizon {stream.horizon}")
        p1 = {s: stream.events[s] for s in stream.steps_up_to(H)}
        return EnumTrace(TAG, H, p1, None, (), p1_complete=H >= stream.horizon)
    if m == 0:  # pragma: no cover - Y_0 is empty
        raise AssertionError("Y_0 is unsatisfiable")
    prev = compute_Y(stream, m - 1)
    p1 = {s: stream.events[s] for s in stream.steps_up_to(m - 1)}
    return EnumTrace(TAG, H, p1, m, tuple(prev.ordered(stream)))


def closure_faithful(stream: ProofStream, H: int | None = None) -> bool:
    """Every closure element of Y_H is itself proved within the horizon."""
    H = stream.horizon if H is None else H
    proved = stream.proofs_up_to(H)
    return compute_Y(stream, H).final <= proved


def make_closure_faithful(stream: ProofStream, H: int | None = None) -> ProofStream:
    """Append missing closure elements as proofs until Y_H adds nothing new.

    New proofs take the first free steps after the last proof, so the
    horizon grows when needed.
    """
    H = stream.horizon if H is None else H
    cur = stream
    while True:
        missing = sorted(compute_Y(cur, H).final - cur.proofs_up_to(H), key=lambda f: f.code)
        if not missing:
            return cur
        cur = cur.extended(missing)
        if cur.horizon > H:
            H = cur.horizon


def kdr_schema_violations(trace: EnumTrace, bound: int | None = None) -> tuple[list[ol.ObjFormula], list[ol.ObjFormula]]:
    """Check ``PR(~phi) -> PR(~PR[g'](phi))`` for ``code(~PR[g'](phi)) <= bound``.

    Returns ``(violations, undecided)``: phi where ``~phi`` is decided
    Rosser-provable and ``~PR[g'](phi)`` is decided not, and phi where the
    implication could not be settled within the horizon. ``bound`` defaults
    to ``m - 1``: the closure formula must already sit in ``F_{m-1}`` to be
    part of ``X = Y_{m-1}``.
    """
    bound = trace.m - 1 if bound is None else bound
    bad, unknown = [], []
    for c, closure in closure_candidates(bound):
        phi = ol.decode(c)
        a = trace.eval_pr(ol.Not(phi))
        if a is False:
            continue
        b = trace.eval_pr(closure)
        if a is True and b is False:
            bad.append(phi)
        elif b is not True:
            unknown.append(phi)
    return bad, unknown
