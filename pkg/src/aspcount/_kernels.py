"""Bitmask sweep kernels behind the brute-force oracle and truth-table counters.

Interpretations over ``n`` atoms are int64 bitmasks (bit ``i`` = atom id ``i``).
Every kernel exists twice: a numba ``@njit`` loop and a chunked pure-numpy
version with identical outputs.  The numba path is used when numba imports
and ``ASPCOUNT_NO_NUMBA`` is unset (or ``0``); set ``ASPCOUNT_NO_NUMBA=1`` to
force numpy.
"""

from __future__ import annotations

import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

MAX_SWEEP_ATOMS = 62
_CHUNK = 1 << 15


def _numba_disabled() -> bool:
    return os.environ.get("ASPCOUNT_NO_NUMBA", "").strip().lower() not in ("", "0", "false", "no")


HAVE_NUMBA = numba is not None
USE_NUMBA = HAVE_NUMBA and not _numba_disabled()


def rule_masks(program):
    """Return ``(head, pos, neg)`` int64 bitmask arrays, one entry per rule."""
    nr = len(program.rules)
    head = np.zeros(nr, dtype=np.int64)
    pos = np.zeros(nr, dtype=np.int64)
    neg = np.zeros(nr, dtype=np.int64)
    for i, r in enumerate(program.rules):
        head[i] = sum(1 << a for a in r.head)
        pos[i] = sum(1 << a for a in r.pos)
        neg[i] = sum(1 << a for a in r.neg)
    return head, pos, neg


def cnf_arrays(clauses):
    """Flatten clauses to CSR form ``(ptr, lits)``."""
    ptr = np.zeros(len(clauses) + 1, dtype=np.int64)
    for i, c in enumerate(clauses):
        ptr[i + 1] = ptr[i] + len(c)
    lits = np.fromiter((l for c in clauses for l in c), dtype=np.int64, count=int(ptr[-1]))
    return ptr, lits


# ---------------------------------------------------------------------------
# numpy implementations


def normal_sweep_numpy(head, pos, neg, n):
    """Flag every interpretation that is an answer set of a normal program."""
    total = 1 << n
    out = np.zeros(total, dtype=np.bool_)
    firing = [i for i in range(len(head)) if head[i] != 0]
    for start in range(0, total, _CHUNK):
        m = np.arange(start, min(total, start + _CHUNK), dtype=np.int64)
        model = np.ones(m.shape[0], dtype=np.bool_)
        for i in range(len(head)):
            model &= ((head[i] & m) != 0) | ((neg[i] & m) != 0) | ((pos[i] & ~m) != 0)
        idx = np.flatnonzero(model)
        if idx.size == 0:
            continue
        mm = m[idx]
        lm = np.zeros_like(mm)
        while True:
            prev = lm
            for i in firing:
                fire = ((neg[i] & mm) == 0) & ((pos[i] & ~lm) == 0)
                lm = np.where(fire, lm | head[i], lm)
            if np.array_equal(prev, lm):
                break
        out[start + idx] = lm == mm
    return out


def _submasks(m: int) -> np.ndarray:
    bits = [b for b in range(m.bit_length()) if (m >> b) & 1]
    idx = np.arange(1 << len(bits), dtype=np.int64)
    sub = np.zeros_like(idx)
    for j, b in enumerate(bits):
        sub |= ((idx >> j) & 1) << b
    return sub


def disjunctive_sweep_numpy(head, pos, neg, n):
    """Flag answer sets using explicit subset search against the reduct."""
    total = 1 << n
    out = np.zeros(total, dtype=np.bool_)
    for start in range(0, total, _CHUNK):
        m = np.arange(start, min(total, start + _CHUNK), dtype=np.int64)
        model = np.ones(m.shape[0], dtype=np.bool_)
        for i in range(len(head)):
            model &= ((head[i] & m) != 0) | ((neg[i] & m) != 0) | ((pos[i] & ~m) != 0)
        for cand in m[model]:
            cand = int(cand)
            subs = _submasks(cand)
            subs = subs[subs != cand]
            ok = np.ones(subs.shape[0], dtype=np.bool_)
            for i in range(len(head)):
                if neg[i] & cand:
                    continue
                ok &= ((head[i] & subs) != 0) | ((pos[i] & ~subs) != 0)
            out[cand] = not ok.any()
    return out


def cnf_sweep_numpy(n_atoms, nvars, clause_ptr, clause_lits, aux_vars, aux_ptr, aux_lits):
    """Flag atom assignments whose functional aux extension satisfies the CNF.

    Atom variables are ``1..n_atoms``; each ``aux_vars[j]`` is set to the
    conjunction of literals ``aux_lits[aux_ptr[j]:aux_ptr[j+1]]``.
    """
    total = 1 << n_atoms
    out = np.zeros(total, dtype=np.bool_)
    shifts = np.arange(n_atoms, dtype=np.int64)
    for start in range(0, total, _CHUNK):
        m = np.arange(start, min(total, start + _CHUNK), dtype=np.int64)
        val = np.zeros((m.shape[0], nvars + 1), dtype=np.bool_)
        val[:, 1 : n_atoms + 1] = ((m[:, None] >> shifts[None, :]) & 1).astype(np.bool_)
        for j in range(aux_vars.shape[0]):
            acc = np.ones(m.shape[0], dtype=np.bool_)
            for l in aux_lits[aux_ptr[j] : aux_ptr[j + 1]]:
                acc &= val[:, l] if l > 0 else ~val[:, -l]
            val[:, aux_vars[j]] = acc
        sat = np.ones(m.shape[0], dtype=np.bool_)
        for c in range(clause_ptr.shape[0] - 1):
            cs = np.zeros(m.shape[0], dtype=np.bool_)
            for l in clause_lits[clause_ptr[c] : clause_ptr[c + 1]]:
                cs |= val[:, l] if l > 0 else ~val[:, -l]
            sat &= cs
        out[start : start + m.shape[0]] = sat
    return out


# ---------------------------------------------------------------------------
# numba implementations

if HAVE_NUMBA:
    from numba import njit

    @njit(cache=True)
    def normal_sweep_numba(head, pos, neg, n):
        total = np.int64(1) << n
        out = np.zeros(total, dtype=np.bool_)
        nr = head.shape[0]
        for m in range(total):
            ok = True
            for i in range(nr):
                if (head[i] & m) == 0 and (neg[i] & m) == 0 and (pos[i] & ~m) == 0:
                    ok = False
                    break
            if not ok:
                continue
            lm = np.int64(0)
            changed = True
            while changed:
                changed = False
                for i in range(nr):
                    h = head[i]
                    if h != 0 and (lm & h) == 0 and (neg[i] & m) == 0 and (pos[i] & ~lm) == 0:
                        lm |= h
                        changed = True
            out[m] = lm == m
        return out

    @njit(cache=True)
    def disjunctive_sweep_numba(head, pos, neg, n):
        total = np.int64(1) << n
        out = np.zeros(total, dtype=np.bool_)
        nr = head.shape[0]
        for m in range(total):
            ok = True
            for i in range(nr):
                if (head[i] & m) == 0 and (neg[i] & m) == 0 and (pos[i] & ~m) == 0:
                    ok = False
                    break
            if not ok:
                continue
            minimal = True
            if m != 0:
                s = (m - 1) & m
                while True:
                    models = True
                    for i in range(nr):
                        if (neg[i] & m) != 0:
                            continue
                        if (head[i] & s) == 0 and (pos[i] & ~s) == 0:
                            models = False
                            break
                    if models:
                        minimal = False
                        break
                    if s == 0:
                        break
                    s = (s - 1) & m
            out[m] = minimal
        return out

    @njit(cache=True)
    def cnf_sweep_numba(n_atoms, nvars, clause_ptr, clause_lits, aux_vars, aux_ptr, aux_lits):
        total = np.int64(1) << n_atoms
        out = np.zeros(total, dtype=np.bool_)
        val = np.zeros(nvars + 1, dtype=np.bool_)
        nclauses = clause_ptr.shape[0] - 1
        for m in range(total):
            for v in range(n_atoms):
                val[v + 1] = ((m >> v) & 1) == 1
            for j in range(aux_vars.shape[0]):
                acc = True
                for k in range(aux_ptr[j], aux_ptr[j + 1]):
                    l = aux_lits[k]
                    if (l > 0 and not val[l]) or (l < 0 and val[-l]):
                        acc = False
                        break
                val[aux_vars[j]] = acc
            sat = True
            for c in range(nclauses):
                cs = False
                for k in range(clause_ptr[c], clause_ptr[c + 1]):
                    l = clause_lits[k]
                    if (l > 0 and val[l]) or (l < 0 and not val[-l]):
                        cs = True
                        break
                if not cs:
                    sat = False
                    break
            out[m] = sat
        return out

else:  # pragma: no cover
    normal_sweep_numba = disjunctive_sweep_numba = cnf_sweep_numba = None


BACKENDS = {"numpy": (normal_sweep_numpy, disjunctive_sweep_numpy, cnf_sweep_numpy)}
if HAVE_NUMBA:
    BACKENDS["numba"] = (normal_sweep_numba, disjunctive_sweep_numba, cnf_sweep_numba)

BACKEND = "numba" if USE_NUMBA else "numpy"
normal_sweep, disjunctive_sweep, cnf_sweep = BACKENDS[BACKEND]
