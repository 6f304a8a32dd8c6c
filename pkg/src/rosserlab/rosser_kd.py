"""The KD construction: stage function h, enumerator g, model M, interpretation f.

``h`` watches the proof stream for the first step ``m`` at which some
``~S(j)`` becomes a tautological consequence of the proofs so far and then
settles on the least such assigned world ``j``. ``g`` copies the stream
while ``h`` is zero and switches to the staged enumeration of every formula
against ``X = P_{T,m-1} + {S(j1) | ... | S(jn)}`` (successors of the settled
world) afterwards.

Scenarios are the two branches a run can be in: ``Consistent`` (h never
settles, no S-atom is true) or ``World(i)`` (h settled to i).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import modal
from . import objlang as ol
from .decision import decide_kd
from .kripke import KripkeModel, disjoint_union, truth_set
from .prop import Entailment
from .streams import ProofStream
from .traces import EnumTrace

__all__ = [
    "WorldAssignment",
    "HTrace",
    "Scenario",
    "CONSISTENT",
    "World",
    "run_h",
    "run_g",
    "build_M",
    "force_scenario",
    "interpret_f",
    "scenario_truth",
    "lemma_stream",
    "horizon_for",
]


@dataclass(frozen=True)
class WorldAssignment:
    """Finite prefix of the world numbering: components of the disjoint union M."""

    model: KripkeModel
    ranges: tuple[tuple[int, ...], ...]
    designated: tuple[int, ...]
    formulas: tuple[modal.Formula, ...] = ()

    def __post_init__(self):
        seen: set[int] = set()
        for r in self.ranges:
            if seen & set(r):
                raise ValueError("component ranges overlap")
            seen |= set(r)
        if seen != set(self.model.worlds):
            raise ValueError("ranges do not cover the model")
        if 0 in seen:
            raise ValueError("world 0 is not assignable")
        if any(not self.model.successors(w) for w in seen):
            raise ValueError("every assigned world needs a successor")

    @property
    def worlds(self) -> tuple[int, ...]:
        return self.model.worlds

    def successors(self, i: int) -> tuple[int, ...]:
        return self.model.successors(i)

    def disjunction(self, i: int) -> ol.ObjFormula:
        """``S(j1) | (S(j2) | ...)`` over the successors of i, ascending."""
        return ol.big_or(ol.SAtom(j) for j in sorted(self.successors(i)))

    def component_of(self, w: int) -> int:
        for k, r in enumerate(self.ranges):
            if w in r:
                return k
        raise KeyError(f"world {w} is not assigned")

    @classmethod
    def single(cls, model: KripkeModel) -> "WorldAssignment":
        d = model.designated if model.designated is not None else model.worlds[0]
        return cls(model, (tuple(model.worlds),), (d,))


@dataclass
class HTrace:
    values: np.ndarray
    settle_point: tuple[int, int] | None

    def __getitem__(self, m: int) -> int:
        return int(self.values[m])

    @property
    def settled(self) -> int:
        return 0 if self.settle_point is None else self.settle_point[1]

    def invariant_violations(self) -> list[str]:
        v = self.values
        out = []
        if v.size and v[0] != 0:
            out.append("h(0) != 0")
        nz = np.flatnonzero(v)
        if nz.size:
            first = nz[0]
            if np.any(v[first:] != v[first]):
                out.append("h changes after settling")
            if np.unique(v[nz]).size > 1:
                out.append("h takes two nonzero values")
            if self.settle_point is None or self.settle_point != (int(first) - 1, int(v[first])):
                out.append("settle point does not match the values")
        elif self.settle_point is not None:
            out.append("settle point recorded but h is zero")
        return out


def _settle(stream: ProofStream, W: WorldAssignment, last_m: int) -> tuple[int, int] | None:
    """First ``(m, i)`` with ``m <= last_m``, ``h(m) = 0`` and ``h(m+1) = i``."""
    worlds = sorted(W.worlds)
    with Entailment() as e:
        present: set[int] = set()
        for s in stream.steps_up_to(last_m):
            f = stream.events[s]
            e.add(f)
            present.update(a.n for a in ol.atoms_of(f) if isinstance(a, ol.SAtom))
            if not e.satisfiable:
                return s, worlds[0]
            for j in worlds:
                # an S-atom absent from the proofs cannot have a provable negation
                if j in present and e.entails(ol.Not(ol.SAtom(j))):
                    return s, j
    return None


def run_h(stream: ProofStream, W: WorldAssignment, H: int) -> HTrace:
    """``h(0..H)``; h(m+1) consults P_{T,m}."""
    if H > stream.horizon + 1:
        raise ValueError(f"H={H} needs proofs beyond the stream horizon {stream.horizon}")
    sp = _settle(stream, W, H - 1)
    values = np.zeros(H + 1, dtype=np.int64)
    if sp is not None:
        values[sp[0] + 1:] = sp[1]
    return HTrace(values, sp)


def run_g(stream: ProofStream, W: WorldAssignment, H: int) -> EnumTrace:
    """g up to position H.

    Once h has settled inside the stream, the rest of g depends only on X,
    so H may exceed the stream horizon; otherwise it may not.
    """
    sp = _settle(stream, W, min(H, stream.horizon))
    if sp is None:
        if H > stream.horizon + 1:
            raise ValueError(f"H={H} needs proofs beyond the stream horizon {stream.horizon}")
        p1 = {s: stream.events[s] for s in stream.steps_up_to(H)}
        return EnumTrace("g", H, p1, None, (), p1_complete=H >= stream.horizon)
    m, i = sp
    X = (*stream.ordered_up_to(m - 1), W.disjunction(i))
    p1 = {s: stream.events[s] for s in stream.steps_up_to(m - 1)}
    return EnumTrace("g", H, p1, m, X, meta={"settled_world": i})


def build_M(unprovable: Sequence[modal.Formula]) -> tuple[KripkeModel, WorldAssignment]:
    """Disjoint union of KD countermodels, one component per formula."""
    if not unprovable:
        raise ValueError("need at least one KD-unprovable formula")
    comps = []
    for A in unprovable:
        v = decide_kd(A)
        if not v.refuted:
            raise ValueError(f"{modal.print_modal(A)} is provable in KD")
        comps.append(v.model)
    union, ren = disjoint_union(comps)
    ranges = tuple(tuple(sorted(r.values())) for r in ren)
    designated = tuple(r[m.designated] for r, m in zip(ren, comps))
    return union, WorldAssignment(union, ranges, designated, tuple(unprovable))


def force_scenario(i: int, W: WorldAssignment, base: ProofStream, step: int | None = None) -> ProofStream:
    """Extend ``base`` by a proof of ``~S(i)`` so that h settles exactly to i."""
    if i not in W.worlds:
        raise ValueError(f"world {i} is not assigned")
    pre = _settle(base, W, base.horizon)
    if pre is not None:
        raise ValueError(f"base stream already triggers h at step {pre[0]} (world {pre[1]})")
    if step is None:
        step = max(base.steps[-1] + 1 if base.steps else 1, 1)
    out = base.with_event(step, ol.Not(ol.SAtom(i)))
    got = _settle(out, W, out.horizon)
    if got != (step, i):
        raise ValueError(f"injection at step {step} settles to {got}, not world {i}")
    return out


def interpret_f(A: modal.Formula, tag: str = "g") -> ol.ObjFormula:
    """Arithmetical interpretation: bot -> 0=1, p -> F(p), []B -> PR[tag](code f(B))."""
    if isinstance(A, modal.Bot):
        return ol.FALSUM
    if isinstance(A, modal.Var):
        return ol.FAtom(A.name)
    if isinstance(A, modal.Not):
        return ol.Not(interpret_f(A.arg, tag))
    if isinstance(A, modal.Box):
        return ol.PRAtom(tag, interpret_f(A.arg, tag).code)
    cls = {modal.And: ol.And, modal.Or: ol.Or, modal.Imp: ol.Imp}[type(A)]
    return cls(interpret_f(A.left, tag), interpret_f(A.right, tag))


@dataclass(frozen=True)
class Scenario:
    world: int | None = None

    def __str__(self):
        return "Consistent" if self.world is None else f"World({self.world})"


CONSISTENT = Scenario(None)


def World(i: int) -> Scenario:  # noqa: N802 - reads like the constructor it stands for
    if i < 1:
        raise ValueError("worlds are numbered from 1")
    return Scenario(i)


def scenario_truth(phi: ol.ObjFormula, scenario: Scenario, trace: EnumTrace,
                   M: KripkeModel) -> bool | None:
    """Truth of ``phi`` in a scenario; ``None`` when a PR-atom is undecided."""
    memo: dict[ol.ObjFormula, bool | None] = {}

    def ev(f: ol.ObjFormula) -> bool | None:
        if f in memo:
            return memo[f]
        if isinstance(f, ol.SAtom):
            r = scenario.world == f.n
        elif isinstance(f, ol.FAtom):
            r = scenario.world is not None and f.var in M.val[scenario.world]
        elif isinstance(f, ol.Named):
            if f != ol.FALSUM:
                raise ValueError(f"named atom {f.name!r} has no meaning in a scenario")
            r = False
        elif isinstance(f, ol.PRAtom):
            if f.tag != trace.kind:
                raise ValueError(f"PR[{f.tag}] atom evaluated over a {trace.kind} trace")
            target = ol.decode(f.arg)
            if target is None:
                raise ValueError(f"PR argument {f.arg} decodes to nothing")
            r = trace.eval_pr(target)
        elif isinstance(f, ol.Not):
            a = ev(f.arg)
            r = None if a is None else not a
        else:
            a, b = ev(f.left), ev(f.right)
            if a is None or b is None:
                r = None
            elif isinstance(f, ol.And):
                r = a and b
            elif isinstance(f, ol.Or):
                r = a or b
            else:
                r = (not a) or b
        memo[f] = r
        return r

    return ev(phi)


def lemma_stream(W: WorldAssignment, corpus: Iterable[modal.Formula], pad: int = 0) -> ProofStream:
    """A consistent base theory that never triggers h.

    For every assigned world j and every boxed content B among the corpus
    subformulas it proves ``S(j) -> f(B)`` if ``j`` forces B and
    ``S(j) -> ~f(B)`` otherwise, and it proves ``f(B)`` outright when B is
    KD-provable. Proofs start after ``pad`` empty steps.
    """
    contents: list[modal.Formula] = []
    for A in corpus:
        for g in modal.subformulas(A):
            if isinstance(g, modal.Box) and g.arg not in contents:
                contents.append(g.arg)
    facts: list[ol.ObjFormula] = []
    for B in contents:
        fb = interpret_f(B)
        forced = truth_set(W.model, B)
        for j in sorted(W.worlds):
            s = ol.SAtom(j)
            facts.append(ol.Imp(s, fb) if j in forced else ol.Imp(s, ol.Not(fb)))
        if decide_kd(B).provable:
            facts.append(fb)
    facts = list(dict.fromkeys(facts))
    events = {pad + 1 + n: f for n, f in enumerate(facts)}
    return ProofStream(events, pad + len(facts), faithful=False)


def horizon_for(m: int, max_code: int) -> int:
    """A horizon by which every stage up to ``max_code`` has finished, whatever the cases."""
    return m + max_code * (m + 1) + m
