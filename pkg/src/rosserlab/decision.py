"""Decision procedures for KD and KDR.

``decide_kd`` runs the KD tableau to completion: a closed tableau yields a
checked Hilbert derivation, an open one a finite serial countermodel.

``decide_kdr`` interleaves two searches under a step budget. The proof
side asks the KD tableau for ``Phi -> A``, where ``Phi`` collects boxed
instances ``[]^k([]~B -> []~[]B)`` of the KDR axiom for ``B`` drawn from the
boxed subformulas of ``A`` (and their negations and ``bot``), ``k`` bounded
by the round number. The model side scans serial frames satisfying
condition (R) by increasing size. No size bound for KDR countermodels is
assumed, so ``Exhausted`` is a legitimate answer.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Literal

import numpy as np

from . import kernels
from .hilbert import Derivation, check_derivation
from .kripke import (
    evaluate,
    frame_properties,
    frame_validity,
    frames_on,
    modal_program,
    model_from_succ,
    model_to_dict,
)
from .modal import BOT, Box, Formula, Imp, Not, Var, modal_depth, print_modal, subformulas, variables
from .tableau import BudgetExceeded, KDTableau, order_key

__all__ = [
    "Verdict",
    "decide_kd",
    "decide_kdr",
    "correspondence_check",
    "CorrespondenceReport",
    "kdr_frames",
    "R_AXIOM",
    "CHECK_ENV",
]

Status = Literal["provable", "refuted", "exhausted"]

R_AXIOM = Imp(Box(Not(Var("p"))), Box(Not(Box(Var("p")))))
CHECK_ENV = "ROSSERLAB_CHECK"
DEFAULT_BUDGET = 200_000
MAX_MODEL_WORLDS = 4
MAX_MODEL_VARS = 3


def _checking() -> bool:
    return os.environ.get(CHECK_ENV, "").lower() in ("1", "true", "yes", "on")


@dataclass
class Verdict:
    status: Status
    logic: str
    formula: Formula
    certificate: Derivation | None = None
    model: object | None = None
    steps: int = 0
    notes: dict = field(default_factory=dict)

    @property
    def provable(self) -> bool:
        return self.status == "provable"

    @property
    def refuted(self) -> bool:
        return self.status == "refuted"

    def verify(self) -> bool:
        """Re-check the certificate or countermodel from scratch."""
        if self.status == "provable":
            ok, _ = check_derivation(self.certificate, self.logic, self.formula)
            return ok
        if self.status == "refuted":
            m = self.model
            props = frame_properties(m.frame)
            frame_ok = props.kdr if self.logic == "kdr" else props.serial
            return frame_ok and not evaluate(m, m.designated, self.formula)
        return True

    def to_dict(self) -> dict:
        out = {
            "status": self.status,
            "logic": self.logic,
            "formula": print_modal(self.formula),
            "steps": self.steps,
        }
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_list()
        if self.model is not None:
            out["model"] = model_to_dict(self.model)
        return out


def _assert_sound(v: Verdict) -> Verdict:
    if _checking() and not v.verify():
        raise AssertionError(f"unsound verdict for {print_modal(v.formula)}")
    return v


def decide_kd(formula: Formula) -> Verdict:
    tab = KDTableau()
    root = tab.sat([Not(formula)])
    if root is not None:
        return _assert_sound(Verdict("refuted", "kd", formula, model=tab.model(root), steps=tab.steps))
    tab.prove(formula)
    return _assert_sound(
        Verdict("provable", "kd", formula, certificate=tab.derivation, steps=tab.steps)
    )


# --------------------------------------------------------------------------
# KDR


def _r_seeds(formula: Formula, wide: bool) -> list[Formula]:
    """Candidate ``B`` for axiom instances: box contents and ``bot``; negations too when ``wide``."""
    seeds = {BOT}
    for g in subformulas(formula):
        if isinstance(g, Box):
            seeds.add(g.arg)
            if wide:
                seeds.add(Not(g.arg))
    return sorted(seeds, key=order_key)


def _try_prove_kdr(formula: Formula, depth: int, budget: int, wide: bool) -> tuple[Derivation | None, int]:
    tab = KDTableau(budget=budget)
    d = tab.derivation
    hyps = []
    for b in _r_seeds(formula, wide):
        line = d.axiom_r(b)
        for k in range(depth + 1):
            hyps.append(line)
            line = d.nec(line)
    try:
        label = frozenset([Not(formula), *(d.formula(i) for i in hyps)])
        if tab.sat(label) is not None:
            return None, tab.steps
        tab.prove(formula, hyps)
    except BudgetExceeded:
        return None, tab.steps
    return d, tab.steps


@lru_cache(maxsize=None)
def kdr_frames(n: int) -> np.ndarray:
    """Successor masks of all serial frames with condition (R) on ``n`` worlds."""
    serial, cond_r = kernels.frame_properties_table(n)
    codes = np.flatnonzero(serial & cond_r)
    return kernels.frame_successors(codes, n)


def _search_kdr_model(formula: Formula, n: int):
    vs = variables(formula)
    frames = kdr_frames(n)
    cost = frames.shape[0] * (1 << (n * len(vs)))
    ops, args = modal_program(formula, vs)
    f, v, w = kernels.search_frames(frames, n, ops, args, len(vs))
    if f < 0:
        return None, cost
    return model_from_succ(n, frames[f], v, vs, w), cost


def _model_search_cost(formula: Formula, n: int) -> int:
    return kdr_frames(n).shape[0] * (1 << (n * len(variables(formula))))


def decide_kdr(formula: Formula, budget: int = DEFAULT_BUDGET, *, cross_check: bool | None = None) -> Verdict:
    """Budgeted dual search. Model-search cost is frames times valuations."""
    if budget <= 0:
        raise ValueError("budget must be positive")
    if cross_check is None:
        cross_check = _checking()
    max_depth = modal_depth(formula) + 1
    nvars = len(variables(formula))
    spent = 0
    proof: Derivation | None = None
    model = None
    rnd = 0
    while spent < budget and (proof is None and model is None):
        depth, n = rnd, rnd + 1
        progressed = False
        if depth <= max_depth:
            progressed = True
            for wide in (False, True):
                proof, used = _try_prove_kdr(formula, depth, budget - spent, wide)
                spent += used
                if proof is not None or spent >= budget:
                    break
        if proof is None and n <= MAX_MODEL_WORLDS and nvars <= MAX_MODEL_VARS:
            cost = _model_search_cost(formula, n)
            if spent + cost <= budget:
                progressed = True
                model, used = _search_kdr_model(formula, n)
                spent += used
        if not progressed:
            break
        rnd += 1
    if cross_check and proof is not None and nvars <= MAX_MODEL_VARS:
        for n in range(1, MAX_MODEL_WORLDS):
            other, _ = _search_kdr_model(formula, n)
            if other is not None:
                raise AssertionError(f"proof and countermodel both found for {print_modal(formula)}")
    if proof is not None:
        return _assert_sound(Verdict("provable", "kdr", formula, certificate=proof, steps=spent))
    if model is not None:
        return _assert_sound(Verdict("refuted", "kdr", formula, model=model, steps=spent))
    return Verdict("exhausted", "kdr", formula, steps=spent)


# --------------------------------------------------------------------------
# correspondence


@dataclass
class CorrespondenceReport:
    max_worlds: int
    by_size: dict[int, int]
    violations: list[dict]

    @property
    def checked(self) -> int:
        return sum(self.by_size.values())

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {
            "max_worlds": self.max_worlds,
            "checked": self.checked,
            "by_size": {str(k): v for k, v in self.by_size.items()},
            "violations": self.violations,
        }


def correspondence_check(max_worlds: int) -> CorrespondenceReport:
    """Compare frame validity of the KDR axiom with condition (R) on every small frame."""
    if max_worlds < 1:
        raise ValueError("max_worlds must be at least 1: there are no frames on 0 worlds")
    if max_worlds > 4:
        raise ValueError("max_worlds is limited to 4")
    by_size: dict[int, int] = {}
    violations = []
    for n in range(1, max_worlds + 1):
        frames = frames_on(n)
        by_size[n] = len(frames)
        for fr in frames:
            valid = frame_validity(fr, R_AXIOM)
            cond = frame_properties(fr).condition_r
            if valid != cond:
                violations.append({"worlds": list(fr.worlds), "rel": sorted(map(list, fr.rel)),
                                   "valid": valid, "condition_r": cond})
    return CorrespondenceReport(max_worlds, by_size, violations)

