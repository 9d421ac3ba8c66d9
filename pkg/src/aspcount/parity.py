"""Random XOR constraints and an incremental Gauss-Jordan parity propagator.

Rows are Python ints used as bitsets over variable indices, kept in reduced
row-echelon form with respect to the variables not yet assigned: each live
row owns a pivot variable that occurs in no other row.  Under that shape a
row with two or more open variables can never be implied to a unit or to
``0 = 1`` by the others, so checking rows one at a time is complete.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np

__all__ = [
    "XorConstraint",
    "Gf2Matrix",
    "AssignResult",
    "sample_xor_set",
    "format_xor",
    "gje_init",
    "gje_assign",
    "gje_backtrack",
]


@dataclass(frozen=True)
class XorConstraint:
    vars: frozenset[int]
    rhs: int

    def holds(self, true_vars: Iterable[int]) -> bool:
        return len(self.vars & frozenset(true_vars)) % 2 == self.rhs


def format_xor(x: XorConstraint) -> str:
    lhs = " + ".join(f"x{v}" for v in sorted(x.vars)) or "0"
    return f"{lhs} = {x.rhs}"


def sample_xor_set(
    atom_vars: Sequence[int], m: int, rng: np.random.Generator
) -> list[XorConstraint]:
    """Draw ``m`` XORs: every variable joins with probability 1/2, rhs uniform."""
    if m < 0:
        raise ValueError("m must be non-negative")
    atom_vars = list(atom_vars)
    out = []
    for _ in range(m):
        pick = rng.integers(0, 2, size=len(atom_vars))
        rhs = int(rng.integers(0, 2))
        out.append(XorConstraint(frozenset(v for v, b in zip(atom_vars, pick) if b), rhs))
    return out


class AssignResult(NamedTuple):
    forced: list[tuple[int, bool]]
    conflict: bool


def _low_bit(x: int) -> int:
    return (x & -x).bit_length() - 1


class Gf2Matrix:
    def __init__(self, constraints: Iterable[XorConstraint] = ()):
        self.rows: list[int] = []
        self.rhs: list[int] = []
        self.pivot: list[int] = []
        self.assigned: dict[int, bool] = {}
        self.conflict = False
        self._log: list[tuple[int, tuple]] = []
        support = 0
        for c in constraints:
            self._add_row(sum(1 << v for v in c.vars), c.rhs)
            support |= sum(1 << v for v in c.vars)
        self.support = support

    def _add_row(self, row: int, rhs: int) -> None:
        for i, p in enumerate(self.pivot):
            if (row >> p) & 1:
                row ^= self.rows[i]
                rhs ^= self.rhs[i]
        if row == 0:
            if rhs:
                self.conflict = True
            return
        p = _low_bit(row)
        for i in range(len(self.rows)):
            if (self.rows[i] >> p) & 1:
                self.rows[i] ^= row
                self.rhs[i] ^= rhs
        self.rows.append(row)
        self.rhs.append(rhs)
        self.pivot.append(p)

    def forced_literals(self) -> list[tuple[int, bool]]:
        return [
            (self.pivot[i], bool(self.rhs[i]))
            for i, row in enumerate(self.rows)
            if row & (row - 1) == 0
        ]

    def __len__(self) -> int:
        return len(self.rows)

    def _snapshot(self) -> tuple:
        return (self.rows[:], self.rhs[:], self.pivot[:], dict(self.assigned), self.conflict)

    def state_hash(self) -> int:
        return hash(
            (tuple(self.rows), tuple(self.rhs), tuple(self.pivot),
             tuple(sorted(self.assigned.items())), self.conflict)
        )

    def assign(self, var: int, value: bool, level: int) -> AssignResult:
        if not (self.support >> var) & 1:
            return AssignResult([], False)
        if var in self.assigned:
            raise ValueError(f"variable {var} already assigned")
        if not self._log or self._log[-1][0] < level:
            self._log.append((level, self._snapshot()))
        self.assigned[var] = bool(value)
        bit = 1 << var
        val = 1 if value else 0
        touched = []
        repivot = -1
        for i in range(len(self.rows)):
            if self.rows[i] & bit:
                self.rows[i] ^= bit
                self.rhs[i] ^= val
                touched.append(i)
                if self.pivot[i] == var:
                    repivot = i
        conflict = False
        if repivot >= 0:
            row = self.rows[repivot]
            if row == 0:
                conflict = bool(self.rhs[repivot])
                del self.rows[repivot], self.rhs[repivot], self.pivot[repivot]
                touched = [i - (i > repivot) for i in touched if i != repivot]
            else:
                p = _low_bit(row)
                self.pivot[repivot] = p
                for j in range(len(self.rows)):
                    if j != repivot and (self.rows[j] >> p) & 1:
                        self.rows[j] ^= row
                        self.rhs[j] ^= self.rhs[repivot]
                        touched.append(j)
        if conflict:
            self.conflict = True
        forced = []
        for i in sorted(set(touched)):
            row = self.rows[i]
            if row and row & (row - 1) == 0:
                forced.append((self.pivot[i], bool(self.rhs[i])))
        return AssignResult(forced, conflict)

    def backtrack(self, level: int) -> None:
        """Restore the state from just before the first assignment at ``level``."""
        snap = None
        while self._log and self._log[-1][0] >= level:
            snap = self._log.pop()[1]
        if snap is not None:
            rows, rhs, pivot, assigned, conflict = snap
            self.rows, self.rhs, self.pivot = rows, rhs, pivot
            self.assigned, self.conflict = assigned, conflict


def gje_init(constraints: Iterable[XorConstraint]) -> Gf2Matrix:
    return Gf2Matrix(constraints)


def gje_assign(mat: Gf2Matrix, var: int, value: bool, level: int) -> AssignResult:
    return mat.assign(var, value, level)


def gje_backtrack(mat: Gf2Matrix, level: int) -> None:
    mat.backtrack(level)
