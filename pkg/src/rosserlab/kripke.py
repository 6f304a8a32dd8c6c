"""Finite Kripke frames and models.

World ids are naturals. Id 0 is reserved for :func:`extend_with_root`;
:func:`disjoint_union` numbers its output from 1.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, NamedTuple, Sequence

import numpy as np

from . import kernels
from .modal import And, Bot, Box, Formula, Imp, Not, Or, Var, subformulas, variables

__all__ = [
    "KripkeFrame",
    "KripkeModel",
    "FrameProperties",
    "evaluate",
    "truth_set",
    "frame_properties",
    "disjoint_union",
    "extend_with_root",
    "frame_validity",
    "modal_program",
    "frames_on",
    "model_to_json",
    "model_from_json",
]

BRUTE_FORCE_WORLDS = 5
BRUTE_FORCE_VARS = 3


@dataclass(frozen=True)
class KripkeFrame:
    worlds: tuple[int, ...]
    rel: frozenset[tuple[int, int]]

    def __post_init__(self):
        worlds = tuple(sorted(set(self.worlds)))
        if not worlds:
            raise ValueError("a frame needs at least one world")
        if any(not isinstance(w, (int, np.integer)) or w < 0 for w in worlds):
            raise ValueError("world ids must be natural numbers")
        object.__setattr__(self, "worlds", tuple(int(w) for w in worlds))
        rel = frozenset((int(x), int(y)) for x, y in self.rel)
        ws = set(self.worlds)
        for x, y in rel:
            if x not in ws or y not in ws:
                raise ValueError(f"edge ({x}, {y}) leaves the world set")
        object.__setattr__(self, "rel", rel)

    @cached_property
    def successors(self) -> dict[int, tuple[int, ...]]:
        succ: dict[int, list[int]] = {w: [] for w in self.worlds}
        for x, y in self.rel:
            succ[x].append(y)
        return {w: tuple(sorted(v)) for w, v in succ.items()}

    def succ_masks(self) -> np.ndarray:
        """Successor bitmasks over positions in ``self.worlds``."""
        pos = {w: i for i, w in enumerate(self.worlds)}
        masks = np.zeros(len(self.worlds), dtype=np.int64)
        for x, y in self.rel:
            masks[pos[x]] |= 1 << pos[y]
        return masks


@dataclass(frozen=True)
class KripkeModel:
    frame: KripkeFrame
    val: Mapping[int, frozenset[str]] = field(default_factory=dict)
    designated: int | None = None

    def __post_init__(self):
        ws = set(self.frame.worlds)
        extra = set(self.val) - ws
        if extra:
            raise ValueError(f"valuation mentions unknown worlds {sorted(extra)}")
        object.__setattr__(
            self, "val", {w: frozenset(self.val.get(w, ())) for w in self.frame.worlds}
        )
        if self.designated is not None and self.designated not in ws:
            raise ValueError(f"designated world {self.designated} is not a world")

    @classmethod
    def build(cls, worlds, rel, val=None, designated=None) -> "KripkeModel":
        return cls(KripkeFrame(tuple(worlds), frozenset(map(tuple, rel))), dict(val or {}), designated)

    @property
    def worlds(self) -> tuple[int, ...]:
        return self.frame.worlds

    @property
    def rel(self) -> frozenset[tuple[int, int]]:
        return self.frame.rel

    def successors(self, w: int) -> tuple[int, ...]:
        return self.frame.successors[w]

    def __hash__(self):
        return hash((self.frame, tuple(sorted(self.val.items())), self.designated))


class FrameProperties(NamedTuple):
    serial: bool
    condition_r: bool

    @property
    def kdr(self) -> bool:
        return self.serial and self.condition_r


def truth_set(model: KripkeModel, formula: Formula) -> frozenset[int]:
    """Worlds of ``model`` where ``formula`` holds, computed bottom-up."""
    worlds = frozenset(model.worlds)
    sets: dict[Formula, frozenset[int]] = {}
    for g in subformulas(formula):
        if isinstance(g, Var):
            s = frozenset(w for w in model.worlds if g.name in model.val[w])
        elif isinstance(g, Bot):
            s = frozenset()
        elif isinstance(g, Not):
            s = worlds - sets[g.arg]
        elif isinstance(g, And):
            s = sets[g.left] & sets[g.right]
        elif isinstance(g, Or):
            s = sets[g.left] | sets[g.right]
        elif isinstance(g, Imp):
            s = (worlds - sets[g.left]) | sets[g.right]
        elif isinstance(g, Box):
            inner = sets[g.arg]
            s = frozenset(w for w in model.worlds if all(v in inner for v in model.successors(w)))
        else:
            raise TypeError(f"not a modal formula: {g!r}")
        sets[g] = s
    return sets[formula]


def evaluate(model: KripkeModel, world: int, formula: Formula) -> bool:
    """Satisfaction ``world ⊩ formula``."""
    if world not in model.frame.successors:
        raise KeyError(f"unknown world {world}")
    return world in truth_set(model, formula)


def frame_properties(frame: KripkeFrame) -> FrameProperties:
    succ = frame.successors
    serial = all(succ[w] for w in frame.worlds)
    sets = {w: set(v) for w, v in succ.items()}
    cond_r = all(sets[x] & sets[y] for x, y in frame.rel)
    return FrameProperties(serial, cond_r)


def disjoint_union(models: Sequence[KripkeModel]) -> tuple[KripkeModel, list[dict[int, int]]]:
    """Renumber the models into consecutive worlds from 1 and take their union.

    Returns the union (no designated world) and, per input model, the map
    from its world ids to the new ids.
    """
    if not models:
        raise ValueError("disjoint union of no models")
    nxt = 1
    rel: set[tuple[int, int]] = set()
    val: dict[int, frozenset[str]] = {}
    assignment: list[dict[int, int]] = []
    for m in models:
        ren = {w: nxt + i for i, w in enumerate(m.worlds)}
        nxt += len(ren)
        rel.update((ren[x], ren[y]) for x, y in m.rel)
        val.update((ren[w], m.val[w]) for w in m.worlds)
        assignment.append(ren)
    return KripkeModel(KripkeFrame(tuple(range(1, nxt)), frozenset(rel)), val), assignment


def extend_with_root(model: KripkeModel, extra_vars: Iterable[str] = ()) -> KripkeModel:
    """Add world 0 seeing every old world and forcing every variable.

    The root's valuation is the set of variables used anywhere in ``model``
    together with ``extra_vars``; pass the variables of the formula under
    study so the root forces all of them.
    """
    if 0 in model.worlds:
        raise ValueError("world 0 is reserved for the new root")
    all_vars = frozenset().union(*model.val.values(), extra_vars)
    rel = set(model.rel) | {(0, w) for w in model.worlds}
    val = dict(model.val)
    val[0] = all_vars
    return KripkeModel(KripkeFrame((0, *model.worlds), frozenset(rel)), val, 0)


def modal_program(formula: Formula, var_order: Sequence[str]):
    """Postfix program for the frame kernels; variables indexed by ``var_order``."""
    index = {v: i for i, v in enumerate(var_order)}

    def leaf(g):
        if isinstance(g, Var):
            return kernels.OP_VAR, index[g.name]
        if isinstance(g, Bot):
            return kernels.OP_BOT, 0
        return None

    def unary(g):
        if isinstance(g, Not):
            return kernels.OP_NOT, (g.arg,)
        if isinstance(g, Box):
            return kernels.OP_BOX, (g.arg,)
        return None

    def binary(g):
        op = {And: kernels.OP_AND, Or: kernels.OP_OR, Imp: kernels.OP_IMP}[type(g)]
        return op, (g.left, g.right)

    return kernels.compile_postfix(formula, leaf, unary, binary)


def frame_validity(frame: KripkeFrame, formula: Formula, limit: int = BRUTE_FORCE_WORLDS) -> bool:
    """Exhaustive check that ``formula`` holds everywhere under every valuation."""
    n = len(frame.worlds)
    vs = variables(formula)
    if n > limit:
        raise ValueError(f"frame has {n} worlds, brute-force limit is {limit}")
    if len(vs) > BRUTE_FORCE_VARS:
        raise ValueError(f"formula has {len(vs)} variables, limit is {BRUTE_FORCE_VARS}")
    ops, args = modal_program(formula, vs)
    v, _ = kernels.frame_refutation(frame.succ_masks(), n, ops, args, len(vs))
    return v < 0


def frames_on(n: int) -> list[KripkeFrame]:
    """All frames on worlds ``1..n`` in frame-code order."""
    out = []
    for code in range(1 << (n * n)):
        rel = frozenset(
            (x + 1, y + 1) for x in range(n) for y in range(n) if (code >> (x * n + y)) & 1
        )
        out.append(KripkeFrame(tuple(range(1, n + 1)), rel))
    return out


def model_from_succ(n: int, succ, valuation: int, var_order: Sequence[str], designated: int) -> KripkeModel:
    """Decode a kernel hit (successor masks + packed valuation) into worlds ``1..n``."""
    full = (1 << n) - 1
    rel = {(x + 1, y + 1) for x in range(n) for y in range(n) if (int(succ[x]) >> y) & 1}
    val = {w + 1: set() for w in range(n)}
    for k, name in enumerate(var_order):
        mask = (valuation >> (k * n)) & full
        for w in range(n):
            if (mask >> w) & 1:
                val[w + 1].add(name)
    return KripkeModel.build(range(1, n + 1), rel, val, designated + 1)


def model_to_dict(model: KripkeModel) -> dict:
    out = {
        "worlds": list(model.worlds),
        "rel": sorted([x, y] for x, y in model.rel),
        "val": {str(w): sorted(model.val[w]) for w in model.worlds if model.val[w]},
    }
    if model.designated is not None:
        out["designated"] = model.designated
    return out


def model_from_dict(data: Mapping) -> KripkeModel:
    try:
        worlds = [int(w) for w in data["worlds"]]
        rel = [(int(x), int(y)) for x, y in data.get("rel", [])]
        val = {int(w): frozenset(vs) for w, vs in data.get("val", {}).items()}
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed model JSON: {exc}") from exc
    return KripkeModel.build(worlds, rel, val, data.get("designated"))


def model_to_json(model: KripkeModel) -> str:
    return json.dumps(model_to_dict(model), sort_keys=True)


def model_from_json(text: str) -> KripkeModel:
    return model_from_dict(json.loads(text))
