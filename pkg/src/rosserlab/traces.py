"""Output traces of the enumerators g and g', and Rosser evaluation over them.

A trace has two parts. Positions ``0 .. m-1`` copy the proof stream
(Procedure 1): position ``y`` holds the formula proved at step ``y``, or
nothing. From position ``m`` on, Procedure 2 runs stage ``k`` for the
``k``-th formula ``phi_k = decode(k + 1)``, against a fixed premise set
``X``:

    C1  phi_k is a t.c. of X            ->  phi_k                 (1 slot)
    C2  only ~phi_k is a t.c. of X      ->  ~phi_k, phi_k         (2 slots)
    C3  neither                         ->  ~^m phi_k, ..., phi_k (m+1 slots)

Stage ``k`` starts at position ``m + t_k`` with ``t_k`` the total length
of the earlier stages. Codes of interesting formulas are far too large to
run the stages one by one, so the trace is lazy. The first occurrence of a
formula is located from the few stages that can output it. Its absolute
position is exact when ``t_k`` has been materialised and otherwise
bracketed by ``k <= t_k <= k (m + 1)``. A query is *decided* when its
settling position provably lies within the horizon, and unknown otherwise.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterator, Mapping

from . import objlang as ol
from .prop import Entailment

__all__ = ["EnumTrace", "Position", "trace_from_dict", "trace_from_json", "trace_to_json", "C1", "C2", "C3"]

C1, C2, C3 = "C1", "C2", "C3"
EXACT_STAGE_CAP = 20_000


@dataclass(frozen=True, order=True)
class Position:
    """Order key for trace positions: Procedure-1 slots precede all Procedure-2 slots."""

    part: int  # 1 or 2
    index: int  # step for part 1, stage k for part 2
    offset: int = 0


@dataclass
class EnumTrace:
    """The output sequence of g (``kind='g'``) or g' (``kind="g'"``) up to ``horizon``.

    ``p1`` holds the Procedure-1 outputs (position -> formula). ``switch`` is
    the position ``m`` where Procedure 2 starts, ``None`` for a run that
    stays in Procedure 1 up to the horizon. ``p1_complete`` records that no
    proof exists beyond the copied ones (the stream ended within the horizon).
    """

    kind: str
    horizon: int
    p1: Mapping[int, ol.ObjFormula]
    switch: int | None = None
    X: tuple[ol.ObjFormula, ...] = ()
    p1_complete: bool = False
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in ol.PR_TAGS:
            raise ValueError(f"unknown enumerator {self.kind!r}")
        self.p1 = dict(self.p1)
        self.X = tuple(self.X)
        limit = self.switch if self.switch is not None else self.horizon + 1
        if any(p < 0 or p >= limit for p in self.p1):
            raise ValueError("Procedure-1 output outside its range")
        self._first_p1: dict[ol.ObjFormula, int] = {}
        for p in sorted(self.p1):
            self._first_p1.setdefault(self.p1[p], p)
        self._ent = Entailment(self.X) if self.switch is not None else None
        self._case: dict[int, str] = {}
        self._t = [0]  # exact t_k for k < len(self._t)

    # ------------------------------------------------------------------
    # Procedure 2 bookkeeping

    @property
    def procedure2(self) -> bool:
        return self.switch is not None

    @property
    def m(self) -> int:
        if self.switch is None:
            raise ValueError("trace never enters Procedure 2")
        return self.switch

    def x_satisfiable(self) -> bool:
        return self._ent.satisfiable

    def is_tc(self, f: ol.ObjFormula) -> bool:
        """``f`` is a t.c. of X."""
        return self._ent.entails(f)

    def case(self, k: int) -> str:
        c = self._case.get(k)
        if c is None:
            f = ol.decode(k + 1)
            if self._ent.entails(f):
                c = C1
            elif self._ent.entails(ol.Not(f)):
                c = C2
            else:
                c = C3
            self._case[k] = c
        return c

    def stage_length(self, k: int) -> int:
        return {C1: 1, C2: 2, C3: self.m + 1}[self.case(k)]

    def t(self, k: int, cap: int = EXACT_STAGE_CAP) -> int | None:
        """Exact ``t_k`` if ``k <= cap``, else ``None``."""
        if k > cap:
            return None
        while len(self._t) <= k:
            j = len(self._t) - 1
            self._t.append(self._t[j] + self.stage_length(j))
        return self._t[k]

    def stage_output(self, k: int, s: int) -> ol.ObjFormula:
        f = ol.decode(k + 1)
        c = self.case(k)
        if c == C1:
            return f
        if c == C2:
            return ol.Not(f) if s == 0 else f
        return ol.negations(f, self.m - s)

    # ------------------------------------------------------------------
    # first occurrences

    def _p2_first(self, f: ol.ObjFormula) -> Position:
        m = self.m
        k = f.code - 1
        best = Position(2, k, {C1: 0, C2: 1, C3: m}[self.case(k)])
        if isinstance(f, ol.Not):
            kc = f.arg.code - 1
            if self.case(kc) == C2:
                best = min(best, Position(2, kc, 0))
        g = f
        r = 0
        while isinstance(g, ol.Not) and r < m:
            g = g.arg
            r += 1
            kg = g.code - 1
            if self.case(kg) == C3:
                best = min(best, Position(2, kg, m - r))
        return best

    def first(self, f: ol.ObjFormula) -> Position | None:
        """Earliest position holding ``f`` (ignoring the horizon); ``None`` if never output."""
        p = self._first_p1.get(f)
        if p is not None:
            return Position(1, p)
        if self.switch is None:
            return None
        return self._p2_first(f)

    def bounds(self, pos: Position) -> tuple[int, int | None]:
        """Lower and upper bound on the absolute position (exact when they agree)."""
        if pos.part == 1:
            return pos.index, pos.index
        m, k = self.m, pos.index
        t = self.t(k, cap=min(EXACT_STAGE_CAP, max(len(self._t) - 1, 0)))
        if t is not None:
            return m + t + pos.offset, m + t + pos.offset
        return m + k + pos.offset, m + k * (m + 1) + pos.offset

    def absolute(self, pos: Position) -> int | None:
        """Exact absolute position, materialising ``t_k`` when cheap enough."""
        if pos.part == 1:
            return pos.index
        t = self.t(pos.index)
        return None if t is None else self.m + t + pos.offset

    def within_horizon(self, pos: Position) -> bool | None:
        lo, hi = self.bounds(pos)
        if lo > self.horizon:
            return False
        if hi is not None and hi <= self.horizon:
            return True
        exact = self.absolute(pos)
        if exact is None:
            return None
        return exact <= self.horizon

    # ------------------------------------------------------------------
    # Rosser evaluation

    def eval_pr(self, f: ol.ObjFormula) -> bool | None:
        """Rosser provability of ``f`` in this trace: ``True``/``False`` when decided, ``None`` if unknown.

        ``f`` is Rosser-provable when it occurs at some position with its
        negation at no position up to there. The verdict is decided once the
        earlier of the two first occurrences lies within the horizon; when
        neither does, a complete Procedure-1 run decides ``False``.
        """
        pf = self.first(f)
        pn = self.first(ol.Not(f))
        cands = [p for p in (pf, pn) if p is not None]
        if not cands:
            if self.switch is None and self.p1_complete:
                return False
            return None
        settle = min(cands)
        inside = self.within_horizon(settle)
        if inside is None:
            return None
        if not inside:
            if self.switch is None and self.p1_complete:
                return False
            return None
        return settle == pf

    # ------------------------------------------------------------------
    # explicit outputs (used for cross-checks and JSON)

    def outputs(self, limit: int | None = None) -> Iterator[tuple[int, ol.ObjFormula | None, tuple]]:
        """``(position, formula or None, tag)`` for positions ``0 .. min(horizon, limit)``."""
        last = self.horizon if limit is None else min(self.horizon, limit)
        end1 = self.switch if self.switch is not None else last + 1
        for y in range(min(end1, last + 1)):
            yield y, self.p1.get(y), ("P1", y)
        if self.switch is None:
            return
        pos, k = self.m, 0
        while pos <= last:
            c = self.case(k)
            for s in range(self.stage_length(k)):
                if pos > last:
                    return
                yield pos, self.stage_output(k, s), ("P2", k, c, s)
                pos += 1
            k += 1

    def eval_pr_explicit(self, f: ol.ObjFormula) -> bool | None:
        """Same question answered by scanning materialised outputs (small horizons only)."""
        neg = ol.Not(f)
        for _, g, _ in self.outputs():
            if g == f:
                return True
            if g == neg:
                return False
        if self.switch is None and self.p1_complete:
            return False
        return None

    # ------------------------------------------------------------------

    def to_dict(self, max_outputs: int = 2000) -> dict:
        out = {
            "kind": self.kind,
            "horizon": self.horizon,
            "p1": {str(p): ol.print_obj(f) for p, f in sorted(self.p1.items())},
            "p1_complete": self.p1_complete,
            "switch": self.switch,
            "X": [ol.print_obj(f) for f in self.X],
        }
        rows = []
        for pos, f, tag in self.outputs(limit=max_outputs - 1):
            rows.append({"pos": pos, "formula": None if f is None else ol.print_obj(f), "tag": list(tag)})
        out["outputs"] = rows
        out["outputs_truncated"] = self.horizon >= max_outputs
        out.update({k: v for k, v in self.meta.items() if k not in out})
        return out


def trace_from_dict(data: Mapping) -> EnumTrace:
    try:
        return EnumTrace(
            kind=data["kind"],
            horizon=int(data["horizon"]),
            p1={int(k): ol.parse_obj(v) for k, v in data.get("p1", {}).items()},
            switch=data.get("switch"),
            X=tuple(ol.parse_obj(t) for t in data.get("X", [])),
            p1_complete=bool(data.get("p1_complete", False)),
        )
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed trace JSON: {exc}") from exc


def trace_from_json(text: str) -> EnumTrace:
    return trace_from_dict(json.loads(text))


def trace_to_json(trace: EnumTrace, max_outputs: int = 2000) -> str:
    return json.dumps(trace.to_dict(max_outputs), sort_keys=True)

