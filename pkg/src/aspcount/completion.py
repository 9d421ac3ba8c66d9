"""Clark completion of a normal program as CNF, and DIMACS export.

Variable layout: atom ``i`` is CNF variable ``i + 1``; body auxiliaries
follow in rule order; copy variables (see :mod:`aspcount.copyformula`) come
after the auxiliaries.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import IO, Sequence

import numpy as np

from . import _kernels
from .program import Program, is_normal
from .semantics import _check_cap

__all__ = [
    "VarClass",
    "VarMap",
    "CnfFormula",
    "NotNormalProgram",
    "clark_completion",
    "completion_models",
    "completion_model_count",
    "export_dimacs",
]


class NotNormalProgram(ValueError):
    """Raised when a construction defined for normal programs gets a disjunctive one."""


class VarClass(Enum):
    ATOM = "atom"
    BODY_AUX = "body_aux"
    COPY = "copy"


@dataclass(frozen=True)
class VarMap:
    atom_names: tuple[str, ...]
    aux_rule: tuple[int, ...]  # rule index for aux var num_atoms + 1 + j
    aux_body: tuple[tuple[int, ...], ...]  # body literals defining that aux var

    @property
    def num_atoms(self) -> int:
        return len(self.atom_names)

    @property
    def num_vars(self) -> int:
        return len(self.atom_names) + len(self.aux_rule)

    def atom_var(self, atom_id: int) -> int:
        return atom_id + 1

    def var_atom(self, var: int) -> int:
        if not 1 <= var <= self.num_atoms:
            raise KeyError(var)
        return var - 1

    def aux_vars(self) -> range:
        return range(self.num_atoms + 1, self.num_vars + 1)

    def var_class(self, var: int) -> VarClass:
        if 1 <= var <= self.num_atoms:
            return VarClass.ATOM
        if var <= self.num_vars:
            return VarClass.BODY_AUX
        return VarClass.COPY


@dataclass(frozen=True)
class CnfFormula:
    num_vars: int
    clauses: tuple[tuple[int, ...], ...]
    var_map: VarMap


def _clause(lits) -> tuple[int, ...]:
    return tuple(dict.fromkeys(lits))


def clark_completion(p: Program) -> CnfFormula:
    if not is_normal(p):
        raise NotNormalProgram("Clark completion is only defined for normal programs")
    n = p.num_atoms
    aux_rule: list[int] = []
    aux_body: list[tuple[int, ...]] = []
    aux_clauses: list[tuple[int, ...]] = []
    body_lit: dict[int, int] = {}  # rule index -> literal standing for the body
    for ri, r in enumerate(p.rules):
        if not r.head or r.body_size == 0:
            continue
        lits = tuple(sorted(a + 1 for a in r.pos)) + tuple(sorted(-(a + 1) for a in r.neg))
        lits = tuple(sorted(lits, key=abs))
        if len(lits) == 1:
            body_lit[ri] = lits[0]
            continue
        aux = n + 1 + len(aux_rule)
        aux_rule.append(ri)
        aux_body.append(lits)
        body_lit[ri] = aux
        for l in lits:
            aux_clauses.append((-aux, l))
        aux_clauses.append(_clause((aux,) + tuple(-l for l in lits)))

    defining: list[list[int]] = [[] for _ in range(n)]
    for ri, r in enumerate(p.rules):
        for h in r.head:
            defining[h].append(ri)

    clauses: list[tuple[int, ...]] = []
    for a in range(n):
        v = a + 1
        rules = defining[a]
        if not rules:
            clauses.append((-v,))
        elif any(p.rules[ri].body_size == 0 for ri in rules):
            clauses.append((v,))
        else:
            bodies = [body_lit[ri] for ri in rules]
            for b in dict.fromkeys(bodies):
                clauses.append(_clause((-b, v)))
            clauses.append(_clause((-v,) + tuple(bodies)))
    clauses.extend(aux_clauses)
    for r in p.rules:
        if not r.head:
            lits = [-(a + 1) for a in r.pos] + [a + 1 for a in r.neg]
            clauses.append(_clause(sorted(lits, key=lambda l: (abs(l), l))))
    vm = VarMap(p.atoms, tuple(aux_rule), tuple(aux_body))
    return CnfFormula(vm.num_vars, tuple(clauses), vm)


def completion_models(f: CnfFormula, cap: int | None = None):
    """Boolean flags over all ``2**n`` atom assignments (bit i = atom i)."""
    vm = f.var_map
    _check_cap(Program(vm.atom_names), cap)
    ptr, lits = _kernels.cnf_arrays(f.clauses)
    aux_ptr, aux_lits = _kernels.cnf_arrays(vm.aux_body)
    aux_vars = np.arange(vm.num_atoms + 1, vm.num_vars + 1, dtype=np.int64)
    return _kernels.cnf_sweep(vm.num_atoms, f.num_vars, ptr, lits, aux_vars, aux_ptr, aux_lits)


def completion_model_count(f: CnfFormula, cap: int | None = None) -> int:
    """Number of atom assignments that extend to a model of the completion.

    Auxiliary values are fixed by their defining bodies, so this is also the
    total model count of ``f``.
    """
    return int(completion_models(f, cap).sum())


def export_dimacs(
    f: CnfFormula,
    sink: IO[str],
    extra_clauses: Sequence[Sequence[int]] = (),
    copy_vars: Sequence[tuple[str, int]] = (),
) -> None:
    """Write ``f`` (plus optional copy clauses) in DIMACS CNF format."""
    vm = f.var_map
    num_vars = f.num_vars + len(copy_vars)
    lines = [f"c atom {name} {vm.atom_var(i)}" for i, name in enumerate(vm.atom_names)]
    lines += [f"c aux rule{ri} {v}" for v, ri in zip(vm.aux_vars(), vm.aux_rule)]
    lines += [f"c copy {name} {v}" for name, v in copy_vars]
    lines.append(f"p cnf {num_vars} {len(f.clauses) + len(extra_clauses)}")
    for c in list(f.clauses) + [tuple(c) for c in extra_clauses]:
        lines.append(" ".join(map(str, c)) + (" 0" if c else "0"))
    sink.write("\n".join(lines) + "\n")
