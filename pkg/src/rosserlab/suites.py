"""Property suites over the decision procedures and the two constructions.

Each runner returns :class:`CheckResult` records; :func:`verify` groups them
into the suites exposed on the command line. The acceptance tests call the
same runners and compare against independent oracles where one exists.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import modal
from . import objlang as ol
from .decision import correspondence_check, decide_kd, decide_kdr
from .generators import obj_atom_pool, random_stream
from .kripke import KripkeModel, evaluate, extend_with_root, frame_properties
from .modal import parse_modal
from .rosser_kd import (
    CONSISTENT,
    World,
    WorldAssignment,
    build_M,
    force_scenario,
    horizon_for,
    interpret_f,
    lemma_stream,
    run_g,
    run_h,
    scenario_truth,
)
from .rosser_kdr import (
    compute_Y,
    first_unsat,
    kdr_schema_violations,
    make_closure_faithful,
    run_gprime,
    y_breakpoints,
)
from .streams import ProofStream
from .traces import EnumTrace

__all__ = [
    "CheckResult",
    "SuiteReport",
    "KD_CORPUS",
    "ADMISSIBILITY_CORPUS",
    "ACL_CORPUS",
    "KDR_STREAMS",
    "run_kd_corpus",
    "run_box_admissibility",
    "run_correspondence",
    "run_h_invariants",
    "run_acl",
    "run_kdr",
    "procedure2_checks",
    "verify",
    "SUITES",
]

# (formula, expected KD status); the first three are the textbook anchors
KD_CORPUS: tuple[tuple[str, str], ...] = (
    ("~[]bot", "provable"),
    ("[](p -> q) -> []p -> []q", "provable"),
    ("[]~p -> []~[]p", "refuted"),
    ("[]p -> p", "refuted"),
    ("p -> []p", "refuted"),
    ("[]p -> <>p", "provable"),
    ("[](p & q) -> []p & []q", "provable"),
    ("[]p & []q -> [](p & q)", "provable"),
    ("[]p | []~p", "refuted"),
    ("<>p | <>~p", "provable"),
    ("[]p -> [][]p", "refuted"),
    ("<>p -> []p", "refuted"),
    ("[](p | ~p)", "provable"),
    ("<>(p | ~p)", "provable"),
    ("[][]p -> []p", "refuted"),
    ("[]bot -> p", "provable"),
    ("[]<>p -> <>[]p", "refuted"),
    ("[](p -> q) -> <>p -> <>q", "provable"),
    ("<>bot", "refuted"),
    ("~[]p -> <>~p", "provable"),
    ("[](p -> []p) -> []p -> [][]p", "provable"),
    ("<>[]p -> []<>p", "refuted"),
    ("[]~[]bot", "provable"),
    ("p -> []<>p", "refuted"),
)

ADMISSIBILITY_CORPUS: tuple[str, ...] = (
    "[]~p -> []~[]p",
    "~[]bot",
    "[]~[]bot",
    "[](p -> q) -> []p -> []q",
    "<>[]p -> <>p",
    "[]p -> <>p",
    "[](p -> q) -> []~q -> []~[]p",
    "[]<>[]p -> []<>p",
    "p | ~p",
    "[]p -> p",
    "p -> []p",
    "[]p -> [][]p",
    "[]~[]p -> []~p",
    "<>p -> []p",
    "[]p | []~p",
    "p",
    "[]<>p -> <>[]p",
    "p -> []<>p",
    "<>p -> [][]p",
    "[](p | q) -> []p | []q",
)

ACL_CORPUS: tuple[str, ...] = (
    "[]p -> p",
    "[]~p -> []~[]p",
    "p -> []p",
    "[]p | []~p",
    "[](p -> q) -> []p -> []q",
    "~[]bot",
    "[]p -> <>p",
    "[](p | ~p)",
)

# hand-built inconsistent streams for the g' suite; "closure_only" becomes
# contradictory only once ~PR[g'](code of S(1)) joins Y_m
KDR_STREAMS: dict[str, dict[int, str]] = {
    "direct": {2: "a", 5: "~a"},
    "closure_only": {5: "~S(1)", 300: "PR[g'](2)"},
    "late_mp": {4: "~S(1)", 40: "a -> b", 250: "a", 260: "~b"},
    "three_proofs": {1: "~S(1)", 2: "~S(2)", 3: '~"0=1"', 350: "S(1) | S(2)"},
    "refuted_f": {7: "~F(p)", 120: '~"0=1"', 400: "F(p)"},
}


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


@dataclass
class SuiteReport:
    suite: str
    checks: list[CheckResult]
    elapsed: float = 0.0

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "ok": self.ok,
            "elapsed_s": round(self.elapsed, 3),
            "checks": [c.to_dict() for c in self.checks],
        }


def _parse_all(texts: Iterable[str | modal.Formula]) -> list[modal.Formula]:
    return [parse_modal(t) if isinstance(t, str) else t for t in texts]


# --------------------------------------------------------------------------
# decision


def run_kd_corpus(corpus: Sequence[tuple[str, str]] = KD_CORPUS) -> CheckResult:
    mismatches, unverified = [], []
    for text, expected in corpus:
        v = decide_kd(parse_modal(text))
        if v.status != expected:
            mismatches.append({"formula": text, "expected": expected, "got": v.status})
        if not v.verify():
            unverified.append(text)
    return CheckResult(
        "kd_corpus",
        not mismatches and not unverified,
        {"formulas": len(corpus), "mismatches": mismatches, "unverified": unverified},
    )


def run_box_admissibility(corpus: Sequence[str] = ADMISSIBILITY_CORPUS, budget: int = 200_000) -> CheckResult:
    rows, bad = [], []
    for text in corpus:
        A = parse_modal(text)
        va = decide_kdr(A, budget)
        vb = decide_kdr(modal.Box(A), budget)
        row = {"formula": text, "A": va.status, "boxA": vb.status}
        ok = va.status == vb.status and va.status != "exhausted" and va.verify() and vb.verify()
        if ok and va.refuted:
            # the root extension of A's countermodel refutes []A at the new root
            ext = extend_with_root(va.model, modal.variables(A))
            ok = frame_properties(ext.frame).kdr and not evaluate(ext, 0, modal.Box(A))
        row["ok"] = ok
        rows.append(row)
        if not ok:
            bad.append(row)
    exhausted = sum(r["A"] == "exhausted" or r["boxA"] == "exhausted" for r in rows)
    return CheckResult("box_admissibility", not bad,
                       {"formulas": len(corpus), "exhausted": exhausted, "failures": bad})


def run_correspondence(max_worlds: int = 3) -> CheckResult:
    rep = correspondence_check(max_worlds)
    return CheckResult("correspondence", rep.ok, rep.to_dict())


# --------------------------------------------------------------------------
# rosser-kd


def acl_setup(corpus: Sequence[str | modal.Formula] = ACL_CORPUS, pad: int = 200,
              model: KripkeModel | None = None):
    """Model, assignment, base stream and the corpus split by KD status.

    Without ``model`` the model is the union of countermodels of the
    unprovable corpus formulas; a given model becomes a single component.
    """
    formulas = _parse_all(corpus)
    unprovable = [A for A in formulas if not decide_kd(A).provable]
    if model is None:
        M, W = build_M(unprovable)
    else:
        M, W = model, WorldAssignment.single(model)
    base = lemma_stream(W, formulas, pad=pad)
    return formulas, unprovable, M, W, base


def run_h_invariants(W: WorldAssignment, seed: int = 0, n_streams: int = 100,
                     horizon: int = 10_000) -> CheckResult:
    rng = np.random.default_rng(seed)
    atoms = obj_atom_pool(worlds=range(1, max(W.worlds) + 3))
    bad, settled = [], 0
    for n in range(n_streams):
        s = random_stream(rng, horizon, int(rng.integers(5, 120)), atoms, neg_s_rate=0.02)
        ht = run_h(s, W, horizon)
        errs = ht.invariant_violations()
        settled += ht.settle_point is not None
        if errs:
            bad.append({"stream": n, "errors": errs})
    return CheckResult("h_invariants", not bad,
                       {"streams": n_streams, "horizon": horizon, "settled": settled, "failures": bad})


def _pair_bound(m: int) -> int:
    """Largest code among ``phi -> psi`` and its negation for codes <= m."""
    top = ol.decode(m)
    return ol.neg_code(ol.Imp(top, top).code)


def procedure2_checks(trace: EnumTrace) -> dict:
    """Characterisation over F_m and K-closure over all pairs from F_m."""
    m = trace.m
    fm = [ol.decode(c) for c in range(1, m + 1)]
    truth = {}
    mismatch, undecided = [], 0
    for f in fm:
        v = trace.eval_pr(f)
        truth[f] = v
        if v is None:
            undecided += 1
        elif v != trace.is_tc(f):
            mismatch.append(ol.print_obj(f))
    k_bad = []
    pairs = 0
    holds = [f for f in fm if truth[f] is True]
    fails = [f for f in fm if truth[f] is not True]
    for a in holds:
        for b in fails:
            pairs += 1
            if trace.eval_pr(ol.Imp(a, b)) is True:
                k_bad.append(f"{ol.print_obj(a)} => {ol.print_obj(b)}")
    return {
        "m": m,
        "F_m": len(fm),
        "mismatches": mismatch,
        "undecided": undecided,
        "k_pairs_checked": pairs,
        "k_violations": k_bad,
        "falsum": trace.eval_pr(ol.FALSUM),
    }


def run_acl(corpus: Sequence[str | modal.Formula] = ACL_CORPUS, pad: int = 200,
            model: KripkeModel | None = None) -> list[CheckResult]:
    """The Procedure-2 suite and the scenario-truth suite for every assigned world."""
    formulas, unprovable, M, W, base = acl_setup(corpus, pad, model)
    subs: list[modal.Formula] = []
    for A in formulas:
        for g in modal.subformulas(A):
            if g not in subs:
                subs.append(g)
    images = {A: interpret_f(A) for A in subs}

    p2_fail, acl3_fail, acl6_fail = [], [], []
    worlds_checked = 0
    truth_by_world: dict[int, dict[modal.Formula, bool | None]] = {}
    for i in W.worlds:
        s = force_scenario(i, W, base)
        m = s.steps[-1]
        queries = [*images.values(), W.disjunction(i), *(ol.Not(ol.SAtom(k)) for k in W.successors(i))]
        H = horizon_for(m, max(_pair_bound(m), *(ol.neg_code(q.code) for q in queries)))
        tr = run_g(s.with_horizon(H), W, H)
        worlds_checked += 1
        if tr.switch != m:
            p2_fail.append({"world": i, "error": "unexpected switch", "switch": tr.switch})
            continue
        rep = procedure2_checks(tr)
        rep["x_satisfiable"] = tr.x_satisfiable()
        if rep["mismatches"] or rep["undecided"] or rep["k_violations"] or rep["falsum"] is not False \
                or not rep["x_satisfiable"]:
            p2_fail.append({"world": i, **rep})
        if tr.eval_pr(W.disjunction(i)) is not True:
            acl3_fail.append({"world": i, "check": "disjunction"})
        for k in W.successors(i):
            if tr.eval_pr(ol.Not(ol.SAtom(k))) is not False:
                acl3_fail.append({"world": i, "check": f"~S({k})"})
        row = {}
        for A in subs:
            got = scenario_truth(images[A], World(i), tr, M)
            row[A] = got
            if got != evaluate(M, i, A):
                acl6_fail.append({"world": i, "formula": modal.print_modal(A), "scenario": got})
        truth_by_world[i] = row

    # the Consistent scenario runs g over the base stream alone
    cons = run_g(base, W, base.horizon)
    cons_row = {A: scenario_truth(images[A], CONSISTENT, cons, M) for A in formulas}
    theorem_fail = []
    for A in formulas:
        provable = A not in unprovable
        in_worlds = [truth_by_world[i][A] for i in W.worlds]
        if provable and (cons_row[A] is not True or not all(v is True for v in in_worlds)):
            theorem_fail.append({"formula": modal.print_modal(A), "kind": "provable not true"})
        # a supplied model need not refute every unprovable formula
        must_refute = model is None or any(not evaluate(M, i, A) for i in W.worlds)
        if not provable and must_refute and not any(v is False for v in in_worlds):
            theorem_fail.append({"formula": modal.print_modal(A), "kind": "no refuting scenario"})
    if cons.eval_pr(ol.FALSUM) is True:
        theorem_fail.append({"kind": "consistent scenario proves 0=1"})

    return [
        CheckResult("procedure2", not p2_fail, {"worlds": worlds_checked, "failures": p2_fail}),
        CheckResult("acl3", not acl3_fail, {"failures": acl3_fail}),
        CheckResult("acl6", not acl6_fail and not theorem_fail,
                    {"worlds": worlds_checked, "subformulas": len(subs),
                     "failures": acl6_fail, "theorem_failures": theorem_fail}),
    ]


# --------------------------------------------------------------------------
# rosser-kdr


def _kdr_atoms() -> list[ol.ObjFormula]:
    pool = obj_atom_pool(worlds=range(1, 4), named=("a", "b"), fvars=("p",))
    pool += [ol.PRAtom("g'", c) for c in (1, 2, 3)]
    return pool


def kdr_random_streams(seed: int, n: int = 50, horizon: int = 600) -> list[ProofStream]:
    rng = np.random.default_rng(seed)
    atoms = _kdr_atoms()
    return [random_stream(rng, horizon, int(rng.integers(2, 25)), atoms, max_size=4, neg_s_rate=0.1)
            for _ in range(n)]


def y_chain_report(stream: ProofStream, H: int | None = None) -> list[dict]:
    """Stabilisation problems of the Y chains at every breakpoint m <= H."""
    H = stream.horizon if H is None else H
    bad = []
    for m in y_breakpoints(stream, H):
        y = compute_Y(stream, m)
        if y.stabilized_at > m:
            bad.append({"m": m, "stabilized_at": y.stabilized_at})
        for lo, hi in zip(y.levels, y.levels[1:]):
            if not lo < hi:
                bad.append({"m": m, "error": "chain not strictly growing before stabilisation"})
            for f in hi - lo:
                if not (isinstance(f, ol.Not) and isinstance(f.arg, ol.PRAtom)
                        and f.arg.tag == "g'" and f.code <= m):
                    bad.append({"m": m, "error": f"unexpected element {ol.print_obj(f)}"})
    return bad


def gprime_trace_checks(stream: ProofStream) -> dict:
    m = first_unsat(stream, stream.horizon)
    if m is None:
        return {"switch": None}
    H = horizon_for(m, _pair_bound(m))
    tr = run_gprime(stream.with_horizon(max(H, stream.horizon)), H)
    rep = procedure2_checks(tr)
    rep["x_satisfiable"] = tr.x_satisfiable()
    rep["schema_violations"], rep["schema_undecided"] = map(
        lambda xs: [ol.print_obj(f) for f in xs], kdr_schema_violations(tr, m))
    rep["schema_violations_m_minus_1"] = [ol.print_obj(f) for f in kdr_schema_violations(tr, m - 1)[0]]
    rep["switch"] = tr.switch
    return rep


def _p2_ok(rep: dict) -> bool:
    # no falsum check: random g' streams may prove the atom 0=1 before m
    return (rep["x_satisfiable"] and not rep["mismatches"] and not rep["undecided"]
            and not rep["k_violations"]
            and not rep["schema_violations"] and not rep["schema_undecided"])


def run_kdr(seed: int = 0, n_streams: int = 50, streams: dict[str, ProofStream] | None = None) -> list[CheckResult]:
    """Y-chain and equivalence checks on random streams plus the Procedure-2 checks
    on the hand-built inconsistent streams, a few random inconsistent ones and
    any inconsistent stream in ``streams``."""
    rand = {f"random_{n}": s for n, s in enumerate(kdr_random_streams(seed, n_streams))}
    given = dict(streams or {})
    stab_bad = []
    equiv_bad = []
    inconsistent: dict[str, tuple[int, ProofStream]] = {}
    for name, s in {**rand, **given}.items():
        errs = y_chain_report(s)
        if errs:
            stab_bad.append({"stream": name, "errors": errs[:5]})
        switch = first_unsat(s, s.horizon)
        all_sat = switch is None
        if all_sat and not s.consistent_at(s.horizon):
            equiv_bad.append({"stream": name, "error": "Y satisfiable but proofs inconsistent"})
        f = make_closure_faithful(s)
        f_sat = first_unsat(f, f.horizon) is None
        if f_sat != f.consistent_at(f.horizon):
            equiv_bad.append({"stream": name, "error": "closure-faithful stream breaks the equivalence"})
        if not all_sat:
            inconsistent[name] = (switch, s)
    # every given inconsistent stream, plus the three random ones that switch earliest
    picked = sorted((v[0], k) for k, v in inconsistent.items() if k not in given)[:3]
    chosen = {k: inconsistent[k][1] for _, k in picked}
    chosen.update({k: v[1] for k, v in inconsistent.items() if k in given})
    fixed = {name: ProofStream.of(ev, max(ev) + 100) for name, ev in KDR_STREAMS.items()}
    cases = {**fixed, **chosen}
    p2_bad = []
    summary = {}
    for name, s in cases.items():
        rep = gprime_trace_checks(s)
        if rep["switch"] is None:
            p2_bad.append({"stream": name, "error": "never enters Procedure 2"})
            continue
        summary[name] = {"m": rep["m"], "F_m": rep["F_m"], "k_pairs": rep["k_pairs_checked"]}
        if not _p2_ok(rep):
            p2_bad.append({"stream": name, **rep})
    n = len(rand) + len(given)
    return [
        CheckResult("y_stabilization", not stab_bad, {"streams": n, "failures": stab_bad}),
        CheckResult("consistency_equivalence", not equiv_bad, {"streams": n, "failures": equiv_bad}),
        CheckResult("gprime_procedure2", not p2_bad and len(cases) >= 5,
                    {"streams": summary, "failures": p2_bad}),
    ]


# --------------------------------------------------------------------------


SUITES = ("acl", "kdr", "decision", "correspondence")


def verify(suite: str, seed: int = 0, *, corpus: Sequence[str | modal.Formula] | None = None,
           model: KripkeModel | None = None, stream: ProofStream | None = None) -> SuiteReport:
    """Run one named suite."""
    t0 = time.perf_counter()
    if suite == "decision":
        checks = [run_kd_corpus(), run_box_admissibility()]
    elif suite == "correspondence":
        checks = [run_correspondence(3)]
    elif suite == "acl":
        corp = corpus if corpus is not None else ACL_CORPUS
        checks = run_acl(corp, model=model)
        W = acl_setup(corp, model=model)[3]
        checks.insert(0, run_h_invariants(W, seed))
    elif suite == "kdr":
        extra = {"given": stream} if stream is not None else None
        checks = run_kdr(seed, streams=extra)
    else:
        raise ValueError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    return SuiteReport(suite, checks, time.perf_counter() - t0)
