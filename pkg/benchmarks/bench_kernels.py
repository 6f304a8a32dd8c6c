"""Compare the numba kernels with the pure-numpy fallback.

    python benchmarks/bench_kernels.py [--repeat N]

Both backends are called directly, so the environment switch is not needed
here. Each kernel is warmed up once before timing so jit compilation is
excluded; the table prints the best of N runs.
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from rosserlab import _accel, kernels
from rosserlab.kripke import modal_program
from rosserlab.modal import parse_modal, variables
from rosserlab.prop import prop_atoms, prop_program, translate_modal


def _table_case(n: int):
    # a tautology over n variables forces a full sweep of all 2^n rows
    text = " & ".join(f"(x{i} | ~x{i})" for i in range(n))
    p = translate_modal(parse_modal(text))
    ids = sorted(prop_atoms(p))
    ops, args = prop_program(p, {a: i for i, a in enumerate(ids)})
    return ops, args, len(ids)


def _frame_case(n: int, text: str):
    f = parse_modal(text)
    vs = variables(f)
    ops, args = modal_program(f, vs)
    codes = np.arange(1 << (n * n), dtype=np.int64)
    return kernels.frame_successors(codes, n), ops, args, len(vs)


def cases():
    for n in (12, 16, 20):
        ops, args, nv = _table_case(n)
        yield (f"truth table, {nv} vars",
               lambda: kernels.np_falsifying_row(ops, args, nv),
               lambda: kernels.nb_falsifying_row(ops, args, nv, kernels._PATTERNS))
    for n in (2, 3):
        # K holds on every frame, so the search never exits early
        frames, ops, args, nv = _frame_case(n, "[](p -> q) -> []p -> []q")
        yield (f"frame search, {frames.shape[0]} frames",
               lambda: kernels.np_search_frames(frames, n, ops, args, nv),
               lambda: kernels.nb_search_frames(frames, n, ops, args, nv))
    for n in (3, 4):
        yield (f"frame properties, {n} worlds",
               lambda: kernels.np_frame_properties(n),
               lambda: kernels.nb_frame_properties(n))


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if not _accel.HAVE_NUMBA:
        raise SystemExit("numba is not importable")
    print(f"{'kernel':34s} {'numpy ms':>10s} {'numba ms':>10s} {'speedup':>8s}")
    for name, np_fn, nb_fn in cases():
        np_fn(), nb_fn()
        t_np = min(timeit.repeat(np_fn, number=1, repeat=args.repeat)) * 1e3
        t_nb = min(timeit.repeat(nb_fn, number=1, repeat=args.repeat)) * 1e3
        print(f"{name:34s} {t_np:10.2f} {t_nb:10.2f} {t_np / t_nb:7.1f}x")


if __name__ == "__main__":
    main()
