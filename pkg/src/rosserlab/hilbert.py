"""Linear Hilbert-style derivations for KD and KDR, and their checker.

A derivation is a list of lines. Each line carries a formula and a
justification:

``taut``      a propositional tautology (modal atoms are variables and boxes)
``K``         an instance of  []( A -> B ) -> ( []A -> []B )
``D``         the axiom  ~[]bot
``R``         an instance of  []~A -> []~[]A   (KDR only)
``mp i j``    from line i (A) and line j (A -> B) infer B
``nec i``     from line i (A) infer []A
``subst i``   a substitution instance of line i

The checker shares no code with the producers beyond the formula types
and the tautology test.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from . import prop
from .modal import BOT, And, Box, Formula, Imp, Not, parse_modal, print_modal, substitute

__all__ = ["Line", "Derivation", "check_derivation", "conj", "imp_chain", "derivation_from_dict"]

RULES = ("taut", "K", "D", "R", "mp", "nec", "subst")
AXIOM_D = Not(Box(BOT))


@dataclass(frozen=True)
class Line:
    formula: Formula
    rule: str
    refs: tuple[int, ...] = ()
    mapping: tuple[tuple[str, Formula], ...] = ()

    def to_dict(self) -> dict:
        out = {"formula": print_modal(self.formula), "rule": self.rule}
        if self.refs:
            out["refs"] = list(self.refs)
        if self.mapping:
            out["mapping"] = {k: print_modal(v) for k, v in self.mapping}
        return out


def conj(items: Sequence[Formula]) -> Formula:
    """Right-nested conjunction; the empty conjunction is ``~bot``."""
    if not items:
        return Not(BOT)
    out = items[-1]
    for f in reversed(items[:-1]):
        out = And(f, out)
    return out


def imp_chain(premises: Sequence[Formula], target: Formula) -> Formula:
    """``p1 -> (p2 -> ... -> target)``."""
    out = target
    for p in reversed(premises):
        out = Imp(p, out)
    return out


@dataclass
class Derivation:
    lines: list[Line] = field(default_factory=list)
    _index: dict[Formula, int] = field(default_factory=dict, repr=False)

    def __len__(self):
        return len(self.lines)

    def _add(self, line: Line) -> int:
        got = self._index.get(line.formula)
        if got is not None:
            return got
        self.lines.append(line)
        self._index[line.formula] = len(self.lines) - 1
        return len(self.lines) - 1

    def formula(self, i: int) -> Formula:
        return self.lines[i].formula

    def taut(self, f: Formula) -> int:
        return self._add(Line(f, "taut"))

    def axiom_k(self, a: Formula, b: Formula) -> int:
        return self._add(Line(Imp(Box(Imp(a, b)), Imp(Box(a), Box(b))), "K"))

    def axiom_d(self) -> int:
        return self._add(Line(AXIOM_D, "D"))

    def axiom_r(self, a: Formula) -> int:
        return self._add(Line(Imp(Box(Not(a)), Box(Not(Box(a)))), "R"))

    def mp(self, i: int, j: int) -> int:
        imp = self.formula(j)
        if not isinstance(imp, Imp) or imp.left != self.formula(i):
            raise ValueError(f"lines {i}, {j} do not fit modus ponens")
        return self._add(Line(imp.right, "mp", (i, j)))

    def nec(self, i: int) -> int:
        return self._add(Line(Box(self.formula(i)), "nec", (i,)))

    def subst(self, i: int, mapping: Mapping[str, Formula]) -> int:
        items = tuple(sorted(mapping.items()))
        return self._add(Line(substitute(self.formula(i), mapping), "subst", (i,), items))

    def derive_tc(self, premises: Sequence[int], target: Formula) -> int:
        """Prove ``target`` from earlier lines it tautologically follows from."""
        if target in self._index:
            return self._index[target]
        prem = list(dict.fromkeys(premises))
        cur = self.taut(imp_chain([self.formula(i) for i in prem], target))
        for i in prem:
            cur = self.mp(i, cur)
        return cur

    def box_chain(self, i: int, n: int | None = None) -> int:
        """From ``a1 -> (a2 -> ... -> b)`` at line i, prove ``[]a1 -> ([]a2 -> ... -> []b)``.

        ``n`` is the number of premises; by default every implication on the
        right spine counts as one, which is wrong when ``b`` is itself an
        implication.
        """
        f = self.formula(i)
        cur = self.nec(i)
        premises: list[Formula] = []
        ks: list[int] = []
        while isinstance(f, Imp) and (n is None or len(ks) < n):
            ks.append(self.axiom_k(f.left, f.right))
            premises.append(Box(f.left))
            f = f.right
        if not ks:
            return cur
        return self.derive_tc([cur, *ks], imp_chain(premises, Box(f)))

    @property
    def conclusion(self) -> Formula | None:
        return self.lines[-1].formula if self.lines else None

    def to_list(self) -> list[dict]:
        return [ln.to_dict() for ln in self.lines]


def derivation_from_dict(items: Iterable[Mapping]) -> Derivation:
    d = Derivation()
    for it in items:
        mapping = tuple(sorted((k, parse_modal(v)) for k, v in it.get("mapping", {}).items()))
        d.lines.append(Line(parse_modal(it["formula"]), it["rule"], tuple(it.get("refs", ())), mapping))
    return d


def _is_k_instance(f: Formula) -> bool:
    # [](A -> B) -> ([]A -> []B)
    if not (isinstance(f, Imp) and isinstance(f.left, Box) and isinstance(f.left.arg, Imp)):
        return False
    a, b = f.left.arg.left, f.left.arg.right
    return f.right == Imp(Box(a), Box(b))


def _is_r_instance(f: Formula) -> bool:
    # []~A -> []~[]A
    if not (isinstance(f, Imp) and isinstance(f.left, Box) and isinstance(f.left.arg, Not)):
        return False
    a = f.left.arg.arg
    return f.right == Box(Not(Box(a)))


def check_derivation(
    deriv: Derivation | Sequence[Line], logic: str = "kd", goal: Formula | None = None
) -> tuple[bool, str]:
    """Verify every line; returns ``(ok, message)``."""
    if logic not in ("kd", "kdr"):
        raise ValueError(f"unknown logic {logic!r}")
    lines = deriv.lines if isinstance(deriv, Derivation) else list(deriv)
    for n, ln in enumerate(lines):
        f, rule, refs = ln.formula, ln.rule, ln.refs
        if any(not (0 <= r < n) for r in refs):
            return False, f"line {n}: reference out of range"
        if rule == "taut":
            ok = prop.is_tautology(f)
        elif rule == "K":
            ok = _is_k_instance(f)
        elif rule == "D":
            ok = f == AXIOM_D
        elif rule == "R":
            ok = logic == "kdr" and _is_r_instance(f)
        elif rule == "mp":
            ok = len(refs) == 2 and lines[refs[1]].formula == Imp(lines[refs[0]].formula, f)
        elif rule == "nec":
            ok = len(refs) == 1 and f == Box(lines[refs[0]].formula)
        elif rule == "subst":
            ok = len(refs) == 1 and f == substitute(lines[refs[0]].formula, dict(ln.mapping))
        else:
            return False, f"line {n}: unknown rule {rule!r}"
        if not ok:
            return False, f"line {n}: {rule} does not justify {print_modal(f)}"
    if goal is not None and all(ln.formula != goal for ln in lines):
        return False, "the goal is not derived"
    return True, "ok"

