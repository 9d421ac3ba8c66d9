"""Exact answer set counting for normal programs.

The search enumerates models of the Clark completion with a chronological
DPLL (two watched literals, no learning), deciding atom variables only.  Each
total atom assignment is accepted iff the copy formula propagates away.  An
optional parity system is enforced during search by :class:`Gf2Matrix`, which
is what the approximate counter uses to count inside a hash cell.
"""

from __future__ import annotations

import time
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Sequence

from .completion import NotNormalProgram, clark_completion, completion_models
from .copyformula import build_copy_formula, copy_check
from .depgraph import loop_atoms
from .parity import Gf2Matrix, XorConstraint
from .program import Program, is_normal
from .semantics import mask_to_set

__all__ = [
    "CountResult",
    "Incomplete",
    "DisjunctiveNotSupported",
    "CompletionSearch",
    "count_exact",
    "count_filter_reference",
]


class Incomplete(RuntimeError):
    """The search ran out of its decision budget before finishing."""


class DisjunctiveNotSupported(NotNormalProgram):
    pass


@dataclass
class CountResult:
    count: int
    mode: str
    stats: dict = field(default_factory=dict)
    meta: dict = field(default_factory=dict)
    elapsed: float = 0.0

    def to_dict(self) -> dict:
        return {"count": str(self.count), "mode": self.mode, "stats": dict(self.stats), **self.meta}


class CompletionSearch:
    """Enumerate completion models that pass the copy check.

    Parameters
    ----------
    program : Program
        A normal program.
    xors : sequence of XorConstraint, optional
        Parity constraints over atom variables (``atom id + 1``).
    order : sequence of int, optional
        Decision order over atom ids; ascending ids by default.
    max_decisions : int, optional
        Raise :class:`Incomplete` after this many decisions.
    """

    def __init__(
        self,
        program: Program,
        xors: Sequence[XorConstraint] = (),
        order: Sequence[int] | None = None,
        max_decisions: int | None = None,
    ):
        if not is_normal(program):
            raise DisjunctiveNotSupported("exact counting supports normal programs only")
        self.program = program
        self.formula = clark_completion(program)
        vm = self.formula.var_map
        self.copy = build_copy_formula(program, loop_atoms(program), vm)
        self.n = program.num_atoms
        self.nvars = vm.num_vars
        self.aux_vars = list(vm.aux_vars())
        if order is None:
            order = range(self.n)
        if sorted(order) != list(range(self.n)):
            raise ValueError("order must be a permutation of the atom ids")
        self.order = [a + 1 for a in order]
        self.max_decisions = max_decisions

        self.values: list[bool | None] = [None] * (self.nvars + 1)
        self.trail: list[int] = []
        self.trail_lim: list[int] = []
        self.levels: list[list] = []  # [decision var, flipped]
        self.qhead = 0
        self.clauses: list[list[int]] = []
        self.watches: dict[int, list[int]] = defaultdict(list)
        self.unsat = False

        self.decisions = 0
        self.propagations = 0
        self.completion_models = 0
        self.copy_rejections = 0

        units = []
        for c in self.formula.clauses:
            if len(c) == 0:
                self.unsat = True
            elif len(c) == 1:
                units.append(c[0])
            else:
                ci = len(self.clauses)
                self.clauses.append(list(c))
                self.watches[c[0]].append(ci)
                self.watches[c[1]].append(ci)

        self.mat = None
        if xors:
            self.mat = Gf2Matrix(xors)
            if self.mat.conflict:
                self.unsat = True
            units.extend(v if b else -v for v, b in self.mat.forced_literals())
        for l in units:
            if not self._enqueue(l):
                self.unsat = True

    # -- assignment helpers -------------------------------------------------

    def _enqueue(self, lit: int) -> bool:
        v = abs(lit)
        cur = self.values[v]
        if cur is None:
            self.values[v] = lit > 0
            self.trail.append(lit)
            return True
        return cur == (lit > 0)

    def _undo_to(self, pos: int) -> None:
        for lit in self.trail[pos:]:
            self.values[abs(lit)] = None
        del self.trail[pos:]
        self.qhead = min(self.qhead, pos)

    def _propagate(self) -> bool:
        values = self.values
        clauses = self.clauses
        watches = self.watches
        while self.qhead < len(self.trail):
            lit = self.trail[self.qhead]
            self.qhead += 1
            self.propagations += 1
            if self.mat is not None and abs(lit) <= self.n:
                forced, conflict = self.mat.assign(abs(lit), lit > 0, len(self.levels))
                if conflict:
                    return False
                for v, b in forced:
                    if not self._enqueue(v if b else -v):
                        return False
            false_lit = -lit
            ws = watches[false_lit]
            kept = []
            for idx, ci in enumerate(ws):
                c = clauses[ci]
                if c[0] == false_lit:
                    c[0], c[1] = c[1], c[0]
                first = c[0]
                fv = values[abs(first)]
                if fv is not None and fv == (first > 0):
                    kept.append(ci)
                    continue
                for k in range(2, len(c)):
                    lk = c[k]
                    vk = values[abs(lk)]
                    if vk is None or vk == (lk > 0):
                        c[1], c[k] = lk, c[1]
                        watches[lk].append(ci)
                        break
                else:
                    kept.append(ci)
                    if fv is not None:
                        kept.extend(ws[idx + 1 :])
                        watches[false_lit] = kept
                        return False
                    self._enqueue(first)
            watches[false_lit] = kept
        return True

    def _pick(self) -> int | None:
        values = self.values
        for v in self.order:
            if values[v] is None:
                return v
        return None

    def _backtrack_flip(self) -> bool:
        while self.levels:
            level = len(self.levels)
            self._undo_to(self.trail_lim[-1])
            if self.mat is not None:
                self.mat.backtrack(level)
            entry = self.levels[-1]
            if not entry[1]:
                entry[1] = True
                self._enqueue(entry[0])
                return True
            self.levels.pop()
            self.trail_lim.pop()
        return False

    def _accept_total(self) -> frozenset[int] | None:
        for v in self.aux_vars:
            if self.values[v] is None:
                raise RuntimeError(f"aux variable {v} unforced at a total atom assignment")
        self.completion_models += 1
        m = frozenset(a for a in range(self.n) if self.values[a + 1])
        if copy_check(m, self.copy):
            return m
        self.copy_rejections += 1
        return None

    # -- driver -------------------------------------------------------------

    def run(self, limit: int | None = None, on_answer=None) -> int:
        """Search; return the number of accepted answer sets (capped at ``limit``)."""
        count = 0
        if self.unsat:
            return 0
        ok = self._propagate()
        while True:
            if not ok:
                if not self._backtrack_flip():
                    break
                ok = self._propagate()
                continue
            v = self._pick()
            if v is None:
                m = self._accept_total()
                if m is not None:
                    count += 1
                    if on_answer is not None:
                        on_answer(m)
                    if limit is not None and count >= limit:
                        break
                ok = False
                continue
            self.decisions += 1
            if self.max_decisions is not None and self.decisions > self.max_decisions:
                raise Incomplete(f"decision budget of {self.max_decisions} exhausted")
            self.trail_lim.append(len(self.trail))
            self.levels.append([v, False])
            self._enqueue(-v)
            ok = self._propagate()
        return count

    def stats(self) -> dict:
        return {
            "decisions": self.decisions,
            "propagations": self.propagations,
            "completion_models": self.completion_models,
            "copy_rejections": self.copy_rejections,
        }


def count_exact(
    p: Program,
    order: Sequence[int] | None = None,
    max_decisions: int | None = None,
) -> CountResult:
    start = time.perf_counter()
    search = CompletionSearch(p, order=order, max_decisions=max_decisions)
    count = search.run()
    return CountResult(count, "exact", search.stats(), elapsed=time.perf_counter() - start)


def count_filter_reference(p: Program, cap: int | None = None) -> CountResult:
    """Truth-table over atoms, keep completion models that pass the copy check."""
    if not is_normal(p):
        raise DisjunctiveNotSupported("filter reference supports normal programs only")
    start = time.perf_counter()
    f = clark_completion(p)
    cf = build_copy_formula(p, loop_atoms(p), f.var_map)
    flags = completion_models(f, cap)
    models = [mask_to_set(int(mk)) for mk in flags.nonzero()[0]]
    count = sum(1 for m in models if copy_check(m, cf))
    stats = {"completion_models": len(models), "copy_rejections": len(models) - count}
    return CountResult(count, "filter", stats, elapsed=time.perf_counter() - start)
