"""Toy proof streams: finite step -> formula maps standing in for a theory's proofs."""

from __future__ import annotations

import bisect
import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping

from . import objlang as ol
from .prop import Entailment

__all__ = ["ProofStream", "stream_from_json", "stream_to_json"]


@dataclass(frozen=True)
class ProofStream:
    """Proofs of a toy theory. Step 0 proves nothing (0 is not a code)."""

    events: Mapping[int, ol.ObjFormula]
    horizon: int
    faithful: bool = False
    _steps: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        ev = {}
        for step, f in dict(self.events).items():
            step = int(step)
            if step < 1:
                raise ValueError(f"step {step}: proofs are numbered from 1")
            if not isinstance(f, ol.ObjFormula):
                raise TypeError(f"step {step}: not an object formula")
            ev[step] = f
        if self.horizon < 0:
            raise ValueError("negative horizon")
        if ev and max(ev) > self.horizon:
            raise ValueError(f"event at step {max(ev)} lies beyond horizon {self.horizon}")
        object.__setattr__(self, "events", ev)
        object.__setattr__(self, "_steps", tuple(sorted(ev)))

    @classmethod
    def of(cls, events: Mapping[int, ol.ObjFormula | str], horizon: int | None = None,
           faithful: bool = False) -> "ProofStream":
        ev = {int(k): ol.parse_obj(v) if isinstance(v, str) else v for k, v in events.items()}
        if horizon is None:
            horizon = max(ev, default=0)
        return cls(ev, horizon, faithful)

    @property
    def steps(self) -> tuple[int, ...]:
        return self._steps

    def at(self, step: int) -> ol.ObjFormula | None:
        return self.events.get(step)

    def steps_up_to(self, n: int) -> tuple[int, ...]:
        return self._steps[: bisect.bisect_right(self._steps, n)]

    def proofs_up_to(self, n: int) -> frozenset[ol.ObjFormula]:
        """P_{T,n}: formulas proved at some step <= n."""
        if n > self.horizon:
            raise ValueError(f"n={n} is beyond the horizon {self.horizon}")
        return frozenset(self.events[s] for s in self.steps_up_to(n))

    def ordered_up_to(self, n: int) -> list[ol.ObjFormula]:
        """Proved formulas in step order, without repeats (deterministic)."""
        return list(dict.fromkeys(self.events[s] for s in self.steps_up_to(n)))

    @cached_property
    def _first(self) -> dict[ol.ObjFormula, int]:
        out: dict[ol.ObjFormula, int] = {}
        for s in self._steps:
            out.setdefault(self.events[s], s)
        return out

    def first_step(self, f: ol.ObjFormula) -> int | None:
        return self._first.get(f)

    def consistent_at(self, n: int) -> bool:
        """The Con_T analog: the events up to step n are propositionally satisfiable."""
        with Entailment(self.proofs_up_to(n)) as e:
            return e.satisfiable

    def first_inconsistency(self) -> int | None:
        """Least step at which the events become propositionally unsatisfiable."""
        with Entailment() as e:
            for s in self._steps:
                e.add(self.events[s])
                if not e.satisfiable:
                    return s
        return None

    def mp_violations(self, n: int | None = None) -> list[tuple[ol.ObjFormula, ol.ObjFormula]]:
        """Pairs (phi, phi -> psi) proved by step n whose psi is never proved within the horizon."""
        n = self.horizon if n is None else n
        proved = self.proofs_up_to(n)
        everything = self.proofs_up_to(self.horizon)
        out = []
        for f in sorted(proved, key=lambda g: g.code):
            if isinstance(f, ol.Imp) and f.left in proved and f.right not in everything:
                out.append((f.left, f))
        return out

    def check_faithful(self) -> bool:
        """True unless the stream claims deductive faithfulness and violates it."""
        return not self.faithful or not self.mp_violations()

    def with_event(self, step: int, f: ol.ObjFormula, horizon: int | None = None) -> "ProofStream":
        if step in self.events:
            raise ValueError(f"step {step} already proves a formula")
        ev = dict(self.events)
        ev[step] = f
        h = max(self.horizon, step) if horizon is None else horizon
        return ProofStream(ev, h, self.faithful)

    def with_horizon(self, horizon: int) -> "ProofStream":
        return ProofStream(dict(self.events), horizon, self.faithful)

    def extended(self, formulas: Iterable[ol.ObjFormula], start: int | None = None) -> "ProofStream":
        """Append formulas at consecutive fresh steps."""
        step = (self._steps[-1] + 1) if start is None and self._steps else (start or 1)
        ev = dict(self.events)
        for f in formulas:
            while step in ev:
                step += 1
            ev[step] = f
            step += 1
        return ProofStream(ev, max(self.horizon, max(ev, default=0)), self.faithful)

    def to_dict(self) -> dict:
        return {
            "horizon": self.horizon,
            "events": {str(s): ol.print_obj(self.events[s]) for s in self._steps},
            "faithful": self.faithful,
        }


def stream_to_json(stream: ProofStream) -> str:
    return json.dumps(stream.to_dict(), sort_keys=True)


def stream_from_json(text: str) -> ProofStream:
    data = json.loads(text)
    try:
        events = {int(k): ol.parse_obj(v) for k, v in data.get("events", {}).items()}
        horizon = int(data["horizon"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed stream JSON: {exc}") from exc
    return ProofStream(events, horizon, bool(data.get("faithful", False)))
