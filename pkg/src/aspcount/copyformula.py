"""Copy formula construction and the unit-propagation acceptance test.

For each loop atom ``v`` a fresh copy variable ``v'`` is introduced with

* ``v' -> v`` for every loop atom, and
* ``a1' & .. & ak' & b1 & .. & bm & ~c1 & .. & ~cn -> x'`` for every rule
  ``x :- a1..ak, b1..bm, not c1..cn`` whose head ``x`` is a loop atom, where
  the ``a`` are loop atoms and the ``b`` are not.

Given a total atom assignment that satisfies the completion, propagating it
through these clauses leaves no residual clause exactly when the assignment
is an answer set.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .completion import NotNormalProgram, VarMap
from .program import Program, is_normal

__all__ = ["CopyFormula", "Residual", "build_copy_formula", "unit_propagate", "copy_check"]


@dataclass(frozen=True)
class CopyFormula:
    clauses: tuple[tuple[int, ...], ...]
    copy_of: dict[int, int]  # loop atom id -> copy var
    num_atoms: int
    atom_names: tuple[str, ...]

    @property
    def copy_vars(self) -> list[tuple[str, int]]:
        return [(self.atom_names[a], v) for a, v in sorted(self.copy_of.items(), key=lambda kv: kv[1])]


@dataclass
class Residual:
    clauses_remaining: list[tuple[int, ...]]
    derived_literals: dict[int, bool]
    conflict: bool


def build_copy_formula(p: Program, loops: Iterable[int], vm: VarMap) -> CopyFormula:
    if not is_normal(p):
        raise NotNormalProgram("copy formulas are only defined for normal programs")
    loops = frozenset(loops)
    if not all(0 <= a < p.num_atoms for a in loops):
        raise ValueError("loop atoms must belong to the program")
    nxt = vm.num_vars + 1
    copy_of = {}
    for a in sorted(loops):
        copy_of[a] = nxt
        nxt += 1
    clauses: list[tuple[int, ...]] = []
    for a in sorted(loops):
        clauses.append((-copy_of[a], a + 1))
    for r in p.rules:
        if not r.head:
            continue
        (x,) = r.head
        if x not in loops:
            continue
        lits = [-copy_of[a] for a in sorted(r.pos & loops)]
        lits += [-(b + 1) for b in sorted(r.pos - loops)]
        lits += [c + 1 for c in sorted(r.neg)]
        lits.append(copy_of[x])
        clauses.append(tuple(dict.fromkeys(lits)))
    return CopyFormula(tuple(clauses), copy_of, p.num_atoms, p.atoms)


def unit_propagate(
    clauses: Sequence[Sequence[int]], assignment: Mapping[int, bool]
) -> Residual:
    """Propagate ``assignment`` to a fixpoint over ``clauses``.

    Satisfied clauses are dropped and false literals removed; what is left
    (clauses with at least two open literals) is returned as the residual.
    """
    values = dict(assignment)
    occurs: dict[int, list[int]] = defaultdict(list)
    for ci, c in enumerate(clauses):
        for l in c:
            occurs[abs(l)].append(ci)
    pending = list(range(len(clauses)))
    queued = [True] * len(clauses)
    conflict = False
    while pending and not conflict:
        ci = pending.pop()
        queued[ci] = False
        open_lits = []
        satisfied = False
        for l in clauses[ci]:
            v = values.get(abs(l))
            if v is None:
                open_lits.append(l)
            elif v == (l > 0):
                satisfied = True
                break
        if satisfied:
            continue
        if not open_lits:
            conflict = True
        elif len(open_lits) == 1:
            l = open_lits[0]
            values[abs(l)] = l > 0
            for cj in occurs[abs(l)]:
                if not queued[cj]:
                    queued[cj] = True
                    pending.append(cj)
    remaining = []
    for c in clauses:
        if any(values.get(abs(l)) == (l > 0) for l in c):
            continue
        remaining.append(tuple(l for l in c if abs(l) not in values))
    return Residual(remaining, values, conflict)


def copy_check(m: Iterable[int], cf: CopyFormula) -> bool:
    """True iff propagating the atom assignment ``m`` empties the copy formula."""
    if not cf.clauses:
        return True
    m = frozenset(m)
    assignment = {a + 1: a in m for a in range(cf.num_atoms)}
    res = unit_propagate(cf.clauses, assignment)
    return not res.conflict and not res.clauses_remaining
