"""Independent oracles shared by the test modules.

None of these touch the SAT solver, the tableau or the numba kernels: they
are small brute-force re-derivations straight from the definitions.
"""

from __future__ import annotations

import itertools

import pytest

from rosserlab import modal
from rosserlab import objlang as ol


# ---------------------------------------------------------------- propositional


def obj_atoms(f, out=None):
    out = set() if out is None else out
    if ol.is_atomic(f):
        out.add(f)
    elif isinstance(f, ol.Not):
        obj_atoms(f.arg, out)
    else:
        obj_atoms(f.left, out)
        obj_atoms(f.right, out)
    return out


def obj_value(f, row):
    if ol.is_atomic(f):
        return row[f]
    if isinstance(f, ol.Not):
        return not obj_value(f.arg, row)
    a, b = obj_value(f.left, row), obj_value(f.right, row)
    if isinstance(f, ol.And):
        return a and b
    if isinstance(f, ol.Or):
        return a or b
    return (not a) or b


def tc_oracle(X, psi) -> bool:
    """Truth-table tautological consequence over the atoms of X and psi."""
    atoms = sorted(set().union(*(obj_atoms(f) for f in [*X, psi])), key=lambda a: a.code)
    for bits in itertools.product((False, True), repeat=len(atoms)):
        row = dict(zip(atoms, bits))
        if all(obj_value(f, row) for f in X) and not obj_value(psi, row):
            return False
    return True


def sat_oracle(X) -> bool:
    atoms = sorted(set().union(set(), *(obj_atoms(f) for f in X)), key=lambda a: a.code)
    for bits in itertools.product((False, True), repeat=len(atoms)):
        row = dict(zip(atoms, bits))
        if all(obj_value(f, row) for f in X):
            return True
    return False


# ---------------------------------------------------------------- Kripke


def holds(succ, val, w, f) -> bool:
    """Satisfaction straight from the clauses; ``succ`` maps world -> successors."""
    if isinstance(f, modal.Bot):
        return False
    if isinstance(f, modal.Var):
        return f.name in val.get(w, ())
    if isinstance(f, modal.Not):
        return not holds(succ, val, w, f.arg)
    if isinstance(f, modal.Box):
        return all(holds(succ, val, v, f.arg) for v in succ[w])
    a = holds(succ, val, w, f.left)
    b = holds(succ, val, w, f.right)
    if isinstance(f, modal.And):
        return a and b
    if isinstance(f, modal.Or):
        return a or b
    return (not a) or b


def all_frames(n):
    """Every relation on worlds 0..n-1, as successor dicts."""
    pairs = [(x, y) for x in range(n) for y in range(n)]
    for bits in itertools.product((0, 1), repeat=len(pairs)):
        succ = {w: [] for w in range(n)}
        for (x, y), b in zip(pairs, bits):
            if b:
                succ[x].append(y)
        yield succ


def serial(succ):
    return all(succ[w] for w in succ)


def condition_r(succ):
    """x sees y implies some z seen by both x and y."""
    return all(any(z in succ[y] for z in succ[x]) for x in succ for y in succ[x])


def refuting_model(f, max_worlds=3, frame_ok=serial):
    """First (succ, val, world) with frame_ok(succ) refuting f, or None."""
    vs = modal.variables(f)
    for n in range(1, max_worlds + 1):
        for succ in all_frames(n):
            if not frame_ok(succ):
                continue
            for bits in itertools.product((False, True), repeat=n * len(vs)):
                val = {w: {v for i, v in enumerate(vs) if bits[w * len(vs) + i]} for w in range(n)}
                for w in range(n):
                    if not holds(succ, val, w, f):
                        return succ, val, w
    return None


# ---------------------------------------------------------------- stage function


def h_oracle(events: dict, worlds, H):
    """h(0..H) recomputed from scratch at every m with the truth-table oracle."""
    ws = sorted(worlds)
    h = [0] * (H + 1)
    for m in range(H):
        if h[m] != 0:
            h[m + 1] = h[m]
            continue
        P = [f for s, f in events.items() if s <= m]
        hit = [j for j in ws if tc_oracle(P, ol.Not(ol.SAtom(j)))]
        h[m + 1] = hit[0] if hit else 0
    return h


def g_outputs_oracle(events, X, m, H):
    """Explicit g outputs up to H given the switch m and the set X (None for no switch)."""
    out = []
    if m is None:
        return [events.get(y) for y in range(H + 1)]
    out = [events.get(y) for y in range(m)]
    k = 0
    while len(out) <= H:
        phi = ol.decode(k + 1)
        if tc_oracle(X, phi):
            out.append(phi)
        elif tc_oracle(X, ol.Not(phi)):
            out += [ol.Not(phi), phi]
        else:
            out += [ol.negations(phi, m - s) for s in range(m + 1)]
        k += 1
    return out[: H + 1]


def rosser_oracle(outputs, f):
    neg = ol.Not(f)
    for g in outputs:
        if g == f:
            return True
        if g == neg:
            return False
    return None


@pytest.fixture(scope="session")
def sample_model():
    from rosserlab.kripke import KripkeModel

    return KripkeModel.build([1, 2], [(1, 2), (2, 2)], {2: ["p"]}, 1)


# ---------------------------------------------------------------- acceptance report

ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
