"""Answer set semantics from first principles, plus the brute-force oracle.

Interpretations are frozensets of atom ids.  The per-interpretation checks
here are plain set arithmetic; :func:`enumerate_answer_sets` sweeps all
``2**n`` interpretations with a bitmask kernel.
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterable

import numpy as np

from . import _kernels
from .program import Program, Rule, is_normal

__all__ = [
    "AtomCapExceeded",
    "DEFAULT_ATOM_CAP",
    "satisfies",
    "is_model",
    "gl_reduct",
    "least_model",
    "is_answer_set",
    "is_answer_set_by_subsets",
    "enumerate_answer_sets",
    "count_bruteforce",
]

DEFAULT_ATOM_CAP = 24


class AtomCapExceeded(ValueError):
    """The program has too many atoms for a ``2**n`` sweep."""


def satisfies(m: Iterable[int], r: Rule) -> bool:
    m = m if isinstance(m, (set, frozenset)) else frozenset(m)
    return bool((r.head | r.neg) & m) or not r.pos <= m


def is_model(m: Iterable[int], p: Program) -> bool:
    m = frozenset(m)
    return all(satisfies(m, r) for r in p.rules)


def gl_reduct(p: Program, m: Iterable[int]) -> Program:
    m = frozenset(m)
    rules = tuple(Rule(r.head, r.pos) for r in p.rules if not r.neg & m)
    return Program(p.atoms, rules)


def least_model(p: Program) -> frozenset[int]:
    """Least fixpoint of one-step rule firing for a definite program."""
    for r in p.rules:
        if r.neg:
            raise ValueError("least_model requires a negation-free program")
        if len(r.head) != 1:
            raise ValueError("least_model requires exactly one head atom per rule")
    derived: set[int] = set()
    changed = True
    while changed:
        changed = False
        for r in p.rules:
            if r.pos <= derived and not r.head <= derived:
                derived |= r.head
                changed = True
    return frozenset(derived)


def is_answer_set(p: Program, m: Iterable[int]) -> bool:
    m = frozenset(m)
    if not is_model(m, p):
        return False
    if not is_normal(p):
        return is_answer_set_by_subsets(p, m)
    reduct = gl_reduct(p, m)
    # constraints of the reduct are satisfied because m models p
    definite = Program(p.atoms, tuple(r for r in reduct.rules if r.head))
    return least_model(definite) == m


def is_answer_set_by_subsets(p: Program, m: Iterable[int]) -> bool:
    """Definitional test: no proper subset of ``m`` models the reduct."""
    m = frozenset(m)
    if not is_model(m, p):
        return False
    reduct = gl_reduct(p, m)
    members = sorted(m)
    for size in range(len(members)):
        for sub in combinations(members, size):
            if is_model(sub, reduct):
                return False
    return True


def _check_cap(p: Program, cap: int | None) -> None:
    cap = DEFAULT_ATOM_CAP if cap is None else cap
    if p.num_atoms > min(cap, _kernels.MAX_SWEEP_ATOMS):
        raise AtomCapExceeded(
            f"program has {p.num_atoms} atoms; brute-force cap is {min(cap, _kernels.MAX_SWEEP_ATOMS)}"
        )


def answer_set_masks(p: Program, cap: int | None = None) -> np.ndarray:
    """Bitmasks of all answer sets, ascending as integers."""
    _check_cap(p, cap)
    head, pos, neg = _kernels.rule_masks(p)
    sweep = _kernels.normal_sweep if is_normal(p) else _kernels.disjunctive_sweep
    return np.flatnonzero(sweep(head, pos, neg, p.num_atoms)).astype(np.int64)


def mask_to_set(mask: int) -> frozenset[int]:
    mask = int(mask)
    return frozenset(i for i in range(mask.bit_length()) if (mask >> i) & 1)


def enumerate_answer_sets(p: Program, cap: int | None = None) -> list[frozenset[int]]:
    """All answer sets, ordered lexicographically by sorted atom-id tuples."""
    sets = [mask_to_set(mk) for mk in answer_set_masks(p, cap)]
    sets.sort(key=sorted)
    return sets


def count_bruteforce(p: Program, cap: int | None = None) -> int:
    return int(answer_set_masks(p, cap).size)
