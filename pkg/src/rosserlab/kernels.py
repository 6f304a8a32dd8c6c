"""Brute-force inner loops: truth tables, frame validity, model search.

Formulas reach this module as postfix programs: parallel ``ops``/``args``
int arrays built by :func:`compile_postfix`. Every kernel exists twice, a
``numba`` loop version (``nb_*``) and a vectorised numpy version
(``np_*``); the public names dispatch on :data:`rosserlab._accel.USE_NUMBA`.

Frames are encoded with worlds ``0..n-1``; ``succ[w]`` is the bitmask of
successors of ``w``. A frame code ``c`` packs the relation row-major:
bit ``x*n + y`` is set iff ``x`` sees ``y``.
"""

from __future__ import annotations

import numpy as np

from ._accel import USE_NUMBA, njit

OP_VAR, OP_BOT, OP_NOT, OP_AND, OP_OR, OP_IMP, OP_BOX = range(7)

MAX_TABLE_VARS = 24


def compile_postfix(f, leaf, unary, binary):
    """Flatten a formula tree into ``(ops, args)`` int64 arrays.

    ``leaf(f)`` returns ``(opcode, arg)`` for leaves or ``None`` for inner
    nodes; ``unary(f)``/``binary(f)`` return ``(opcode, children)``.
    """
    ops: list[int] = []
    args: list[int] = []

    def walk(g):
        lf = leaf(g)
        if lf is not None:
            ops.append(lf[0])
            args.append(lf[1])
            return
        op, kids = unary(g) or binary(g)
        for k in kids:
            walk(k)
        ops.append(op)
        args.append(0)

    walk(f)
    return np.asarray(ops, dtype=np.int64), np.asarray(args, dtype=np.int64)


# --------------------------------------------------------------------------
# truth tables


def _row_patterns():
    pats = np.zeros(6, dtype=np.uint64)
    for k in range(6):
        m = 0
        for t in range(64):
            if (t >> k) & 1:
                m |= 1 << t
        pats[k] = m
    return pats


_PATTERNS = _row_patterns()


@njit
def nb_falsifying_row(ops, args, nvars, patterns):
    """First assignment row (bit k of the row = var k) falsifying the program, or -1."""
    nrows = np.int64(1) << nvars
    nblocks = max(np.int64(1), nrows >> 6)
    full = np.uint64(0xFFFFFFFFFFFFFFFF)
    if nrows < 64:
        valid_last = (np.uint64(1) << np.uint64(nrows)) - np.uint64(1)
    else:
        valid_last = full
    stack = np.zeros(len(ops), dtype=np.uint64)
    for b in range(nblocks):
        sp = 0
        for i in range(len(ops)):
            op = ops[i]
            if op == 0:
                k = args[i]
                if k < 6:
                    stack[sp] = patterns[k]
                elif (b >> (k - 6)) & 1:
                    stack[sp] = full
                else:
                    stack[sp] = np.uint64(0)
                sp += 1
            elif op == 1:
                stack[sp] = np.uint64(0)
                sp += 1
            elif op == 2:
                stack[sp - 1] = ~stack[sp - 1]
            else:
                a = stack[sp - 2]
                c = stack[sp - 1]
                sp -= 1
                if op == 3:
                    stack[sp - 1] = a & c
                elif op == 4:
                    stack[sp - 1] = a | c
                else:
                    stack[sp - 1] = (~a) | c
        bad = (~stack[0]) & (valid_last if b == nblocks - 1 else full)
        if bad != 0:
            t = 0
            while not (bad >> np.uint64(t)) & np.uint64(1):
                t += 1
            return (b << 6) + t
    return -1


def np_falsifying_row(ops, args, nvars, patterns=None):
    rows = np.arange(1 << nvars, dtype=np.int64)
    stack = []
    for op, a in zip(ops.tolist(), args.tolist()):
        if op == OP_VAR:
            stack.append(((rows >> a) & 1).astype(bool))
        elif op == OP_BOT:
            stack.append(np.zeros(rows.shape, dtype=bool))
        elif op == OP_NOT:
            stack.append(~stack.pop())
        else:
            c = stack.pop()
            x = stack.pop()
            if op == OP_AND:
                stack.append(x & c)
            elif op == OP_OR:
                stack.append(x | c)
            else:
                stack.append(~x | c)
    bad = np.flatnonzero(~stack[0])
    return int(bad[0]) if bad.size else -1


def falsifying_row(ops, args, nvars: int) -> int:
    if nvars > MAX_TABLE_VARS:
        raise ValueError(f"truth table over {nvars} variables exceeds {MAX_TABLE_VARS}")
    if USE_NUMBA:
        return int(nb_falsifying_row(ops, args, nvars, _PATTERNS))
    return np_falsifying_row(ops, args, nvars)


# --------------------------------------------------------------------------
# frames


@njit
def _eval_masks(ops, args, succ, n, var_masks, stack):
    full = (np.int64(1) << n) - 1
    sp = 0
    for i in range(len(ops)):
        op = ops[i]
        if op == 0:
            stack[sp] = var_masks[args[i]]
            sp += 1
        elif op == 1:
            stack[sp] = 0
            sp += 1
        elif op == 2:
            stack[sp - 1] = full & ~stack[sp - 1]
        elif op == 6:
            a = stack[sp - 1]
            r = np.int64(0)
            for w in range(n):
                if (succ[w] & ~a) == 0:
                    r |= np.int64(1) << w
            stack[sp - 1] = r
        else:
            a = stack[sp - 2]
            c = stack[sp - 1]
            sp -= 1
            if op == 3:
                stack[sp - 1] = a & c
            elif op == 4:
                stack[sp - 1] = a | c
            else:
                stack[sp - 1] = (full & ~a) | c
    return stack[0]


@njit
def nb_frame_refutation(succ, n, ops, args, nvars):
    """First (valuation, world) refuting the program on the frame, else (-1, -1).

    Valuation ``v`` gives variable ``k`` the world set ``(v >> k*n) & full``.
    """
    full = (np.int64(1) << n) - 1
    stack = np.zeros(len(ops), dtype=np.int64)
    var_masks = np.zeros(max(nvars, 1), dtype=np.int64)
    total = np.int64(1) << (n * nvars)
    for v in range(total):
        for k in range(nvars):
            var_masks[k] = (v >> (k * n)) & full
        m = _eval_masks(ops, args, succ, n, var_masks, stack)
        if m != full:
            w = 0
            while (m >> w) & 1:
                w += 1
            return v, w
    return -1, -1


@njit
def nb_search_frames(frames, n, ops, args, nvars):
    """Scan frames (rows of successor masks); first refutation as (frame, valuation, world)."""
    for f in range(frames.shape[0]):
        v, w = nb_frame_refutation(frames[f], n, ops, args, nvars)
        if v >= 0:
            return f, v, w
    return -1, -1, -1


def np_frame_refutation(succ, n, ops, args, nvars):
    full = (1 << n) - 1
    vals = np.arange(1 << (n * nvars), dtype=np.int64)
    stack = []
    for op, a in zip(ops.tolist(), args.tolist()):
        if op == OP_VAR:
            stack.append((vals >> (a * n)) & full)
        elif op == OP_BOT:
            stack.append(np.zeros_like(vals))
        elif op == OP_NOT:
            stack.append(full & ~stack.pop())
        elif op == OP_BOX:
            x = stack.pop()
            r = np.zeros_like(vals)
            for w in range(n):
                r |= ((int(succ[w]) & ~x) == 0).astype(np.int64) << w
            stack.append(r)
        else:
            c = stack.pop()
            x = stack.pop()
            if op == OP_AND:
                stack.append(x & c)
            elif op == OP_OR:
                stack.append(x | c)
            else:
                stack.append((full & ~x) | c)
    bad = np.flatnonzero(stack[0] != full)
    if not bad.size:
        return -1, -1
    v = int(bad[0])
    m = int(stack[0][v])
    w = 0
    while (m >> w) & 1:
        w += 1
    return v, w


def np_search_frames(frames, n, ops, args, nvars):
    for f in range(frames.shape[0]):
        v, w = np_frame_refutation(frames[f], n, ops, args, nvars)
        if v >= 0:
            return f, v, w
    return -1, -1, -1


def frame_refutation(succ, n: int, ops, args, nvars: int) -> tuple[int, int]:
    succ = np.asarray(succ, dtype=np.int64)
    if USE_NUMBA:
        v, w = nb_frame_refutation(succ, n, ops, args, nvars)
        return int(v), int(w)
    return np_frame_refutation(succ, n, ops, args, nvars)


def search_frames(frames, n: int, ops, args, nvars: int) -> tuple[int, int, int]:
    frames = np.ascontiguousarray(frames, dtype=np.int64)
    if frames.shape[0] == 0:
        return -1, -1, -1
    if USE_NUMBA:
        f, v, w = nb_search_frames(frames, n, ops, args, nvars)
        return int(f), int(v), int(w)
    return np_search_frames(frames, n, ops, args, nvars)


# --------------------------------------------------------------------------
# frame enumeration


def frame_successors(codes, n: int):
    """Unpack frame codes into an ``(len(codes), n)`` array of successor masks."""
    codes = np.asarray(codes, dtype=np.int64)
    full = (1 << n) - 1
    return np.stack([(codes >> (x * n)) & full for x in range(n)], axis=-1)


@njit
def nb_frame_properties(n):
    total = np.int64(1) << (n * n)
    full = (np.int64(1) << n) - 1
    serial = np.zeros(total, dtype=np.bool_)
    cond_r = np.zeros(total, dtype=np.bool_)
    succ = np.zeros(n, dtype=np.int64)
    for c in range(total):
        for x in range(n):
            succ[x] = (c >> (x * n)) & full
        s = True
        for x in range(n):
            if succ[x] == 0:
                s = False
        r = True
        for x in range(n):
            for y in range(n):
                if (succ[x] >> y) & 1 and (succ[x] & succ[y]) == 0:
                    r = False
        serial[c] = s
        cond_r[c] = r
    return serial, cond_r


def np_frame_properties(n):
    succ = frame_successors(np.arange(1 << (n * n), dtype=np.int64), n)
    serial = np.all(succ != 0, axis=1)
    cond_r = np.ones(succ.shape[0], dtype=bool)
    for x in range(n):
        for y in range(n):
            edge = ((succ[:, x] >> y) & 1).astype(bool)
            cond_r &= ~edge | ((succ[:, x] & succ[:, y]) != 0)
    return serial, cond_r


def frame_properties_table(n: int):
    """``(serial, condition_r)`` boolean arrays indexed by frame code, for all frames on n worlds."""
    if USE_NUMBA:
        return nb_frame_properties(n)
    return np_frame_properties(n)
