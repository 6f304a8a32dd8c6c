"""Command-line entry point.

Exit codes: 0 success / provable / true, 1 refuted / false / failed check,
2 invalid input, 3 budget exhausted or unknown.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import objlang as ol
from .decision import correspondence_check, decide_kd, decide_kdr
from .kripke import model_from_json
from .modal import parse_modal
from .prop import is_tc
from .rosser_kd import WorldAssignment, run_g
from .rosser_kdr import run_gprime
from .streams import stream_from_json
from .suites import SUITES, verify
from .traces import trace_from_json, trace_to_json

EXIT_OK, EXIT_NO, EXIT_INPUT, EXIT_UNKNOWN = 0, 1, 2, 3


class InputError(Exception):
    """Bad flags or unreadable input files."""


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True)


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc


def _emit(text: str, out: str | None) -> None:
    if out is None:
        print(text)
        return
    try:
        Path(out).write_text(text + "\n")
    except OSError as exc:
        raise InputError(f"cannot write {out}: {exc.strerror}") from exc


def _positive(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return n


def _read_corpus(path: str) -> list[str]:
    lines = [ln.split("#", 1)[0].strip() for ln in _read(path).splitlines()]
    out = [ln for ln in lines if ln]
    for ln in out:
        parse_modal(ln)
    if not out:
        raise InputError(f"{path} holds no formulas")
    return out


def _read_set(path: str) -> list[ol.ObjFormula]:
    data = json.loads(_read(path))
    if isinstance(data, dict):
        data = data.get("set")
    if not isinstance(data, list) or not all(isinstance(t, str) for t in data):
        raise InputError(f"{path}: expected a JSON list of formula strings")
    return [ol.parse_obj(t) for t in data]


# --------------------------------------------------------------------------


def cmd_decide(args) -> int:
    A = parse_modal(args.formula)
    if args.logic == "kd":
        v = decide_kd(A)
    else:
        v = decide_kdr(A, args.budget)
    if args.json:
        print(_dump(v.to_dict()))
    else:
        print(v.status)
        if v.model is not None:
            print(_dump(v.to_dict()["model"]))
    return {"provable": EXIT_OK, "refuted": EXIT_NO}.get(v.status, EXIT_UNKNOWN)


def cmd_tc(args) -> int:
    X = _read_set(args.set)
    ok = is_tc(X, ol.parse_obj(args.formula))
    print(_dump({"tc": ok}) if args.json else str(ok).lower())
    return EXIT_OK if ok else EXIT_NO


def cmd_simulate_g(args) -> int:
    model = model_from_json(_read(args.model))
    stream = stream_from_json(_read(args.stream))
    tr = run_g(stream, WorldAssignment.single(model), args.horizon)
    _emit(trace_to_json(tr, args.max_outputs), args.out)
    return EXIT_OK


def cmd_simulate_gprime(args) -> int:
    stream = stream_from_json(_read(args.stream))
    tr = run_gprime(stream, args.horizon)
    _emit(trace_to_json(tr, args.max_outputs), args.out)
    return EXIT_OK


def cmd_eval_pr(args) -> int:
    tr = trace_from_json(_read(args.trace))
    v = tr.eval_pr(ol.parse_obj(args.formula))
    word = "unknown" if v is None else str(v).lower()
    print(_dump({"eval_pr": word}) if args.json else word)
    return EXIT_UNKNOWN if v is None else (EXIT_OK if v else EXIT_NO)


def cmd_frames(args) -> int:
    rep = correspondence_check(args.max_worlds)
    if args.json:
        print(_dump(rep.to_dict()))
    else:
        print(f"checked {rep.checked} frames, {len(rep.violations)} violations")
    return EXIT_OK if rep.ok else EXIT_NO


def cmd_verify(args) -> int:
    model = model_from_json(_read(args.model)) if args.model else None
    corpus = _read_corpus(args.corpus) if args.corpus else None
    stream = stream_from_json(_read(args.stream)) if args.stream else None
    if args.suite != "acl" and (model or corpus):
        raise InputError("--model and --corpus belong to the acl suite")
    if args.suite != "kdr" and stream:
        raise InputError("--stream belongs to the kdr suite")
    rep = verify(args.suite, args.seed, corpus=corpus, model=model, stream=stream)
    if args.json:
        print(_dump(rep.to_dict()))
    else:
        for c in rep.checks:
            print(f"{'PASS' if c.passed else 'FAIL'} {args.suite}/{c.name}")
    return EXIT_OK if rep.ok else EXIT_NO


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rosserlab", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("decide", help="decide a modal formula in KD or KDR")
    d.add_argument("--logic", choices=("kd", "kdr"), required=True)
    d.add_argument("--formula", required=True)
    d.add_argument("--budget", type=_positive, default=200_000)
    d.add_argument("--json", action="store_true")
    d.set_defaults(func=cmd_decide)

    t = sub.add_parser("tc", help="tautological consequence of a formula set")
    t.add_argument("--set", required=True, help="JSON list of object-language formulas")
    t.add_argument("--formula", required=True)
    t.add_argument("--json", action="store_true")
    t.set_defaults(func=cmd_tc)

    g = sub.add_parser("simulate-g", help="run the KD enumerator g")
    g.add_argument("--model", required=True)
    g.add_argument("--stream", required=True)
    g.add_argument("--horizon", type=_positive, required=True)
    g.add_argument("--out")
    g.add_argument("--max-outputs", type=_positive, default=2000)
    g.set_defaults(func=cmd_simulate_g)

    gp = sub.add_parser("simulate-gprime", help="run the KDR enumerator g'")
    gp.add_argument("--stream", required=True)
    gp.add_argument("--horizon", type=_positive, required=True)
    gp.add_argument("--out")
    gp.add_argument("--max-outputs", type=_positive, default=2000)
    gp.set_defaults(func=cmd_simulate_gprime)

    e = sub.add_parser("eval-pr", help="Rosser provability of a formula in a trace")
    e.add_argument("--trace", required=True)
    e.add_argument("--formula", required=True)
    e.add_argument("--json", action="store_true")
    e.set_defaults(func=cmd_eval_pr)

    f = sub.add_parser("frames", help="frame correspondence for []~p -> []~[]p")
    f.add_argument("--max-worlds", type=int, default=3)
    f.add_argument("--json", action="store_true")
    f.set_defaults(func=cmd_frames)

    v = sub.add_parser("verify", help="run a property suite")
    v.add_argument("--suite", choices=SUITES, required=True)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--model")
    v.add_argument("--corpus")
    v.add_argument("--stream")
    v.add_argument("--json", action="store_true")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, ValueError, KeyError, TypeError) as exc:
        # ParseError and JSONDecodeError are ValueErrors
        print(f"rosserlab {args.command}: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
