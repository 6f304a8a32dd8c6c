"""Seeded random generators for formulas and proof streams."""

from __future__ import annotations

import numpy as np

from . import modal
from . import objlang as ol
from .streams import ProofStream

__all__ = ["random_modal", "random_obj", "random_stream", "obj_atom_pool"]


def random_modal(rng: np.random.Generator, size: int, variables=("p", "q", "r")) -> modal.Formula:
    """A random modal formula with roughly ``size`` nodes."""
    if size <= 1:
        k = rng.integers(len(variables) + 1)
        return modal.BOT if k == len(variables) else modal.Var(variables[k])
    op = rng.integers(6)
    if op == 0:
        return modal.Not(random_modal(rng, size - 1, variables))
    if op == 1:
        return modal.Box(random_modal(rng, size - 1, variables))
    left = int(rng.integers(1, size - 1)) if size > 2 else 1
    cls = (modal.And, modal.Or, modal.Imp, modal.Imp)[op - 2]
    return cls(random_modal(rng, left, variables), random_modal(rng, max(size - 1 - left, 1), variables))


def obj_atom_pool(worlds=range(1, 7), named=("a", "b", "c"), fvars=("p", "q")) -> list[ol.ObjFormula]:
    pool: list[ol.ObjFormula] = [ol.SAtom(j) for j in worlds]
    pool += [ol.Named(n) for n in named] + [ol.FAtom(v) for v in fvars] + [ol.FALSUM]
    return pool


def random_obj(rng: np.random.Generator, atoms, size: int) -> ol.ObjFormula:
    if size <= 1:
        return atoms[int(rng.integers(len(atoms)))]
    op = rng.integers(4)
    if op == 0:
        return ol.Not(random_obj(rng, atoms, size - 1))
    left = int(rng.integers(1, size - 1)) if size > 2 else 1
    cls = (ol.And, ol.Or, ol.Imp)[op - 1]
    return cls(random_obj(rng, atoms, left), random_obj(rng, atoms, max(size - 1 - left, 1)))


def random_stream(rng: np.random.Generator, horizon: int, n_events: int, atoms, max_size: int = 5,
                  neg_s_rate: float = 0.05) -> ProofStream:
    """Events at distinct random steps; some events are bare ``~S(j)``."""
    steps = np.sort(rng.choice(np.arange(1, horizon + 1), size=min(n_events, horizon), replace=False))
    s_atoms = [a for a in atoms if isinstance(a, ol.SAtom)]
    events = {}
    for s in steps.tolist():
        if s_atoms and rng.random() < neg_s_rate:
            events[s] = ol.Not(s_atoms[int(rng.integers(len(s_atoms)))])
        else:
            events[s] = random_obj(rng, atoms, int(rng.integers(1, max_size + 1)))
    return ProofStream(events, horizon)
