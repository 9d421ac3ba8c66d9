"""Hashing-based (epsilon, delta) approximate answer set counting.

Each round draws random XOR constraints over the atoms, finds the smallest
number ``m`` of them whose cell holds fewer than ``thresh`` answer sets, and
reports ``cell_count * 2**m``.  The result is the median over all rounds.
"""

from __future__ import annotations

import math
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .exact import CompletionSearch, CountResult, Incomplete
from .parity import XorConstraint, sample_xor_set
from .program import Program, is_normal
from .semantics import answer_set_masks

__all__ = [
    "ApproxConfig",
    "THRESH_CONSTANT",
    "ROUNDS_CONSTANT",
    "derive_thresh",
    "derive_rounds",
    "bounded_count",
    "approx_count",
    "round_rng",
]

THRESH_CONSTANT = 9.84
ROUNDS_CONSTANT = 17


def derive_thresh(epsilon: float) -> int:
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    return 1 + math.ceil(
        THRESH_CONSTANT * (1 + epsilon / (1 + epsilon)) * (1 + 1 / epsilon) ** 2
    )


def derive_rounds(delta: float) -> int:
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")
    rounds = math.ceil(ROUNDS_CONSTANT * math.log2(3 / delta))
    return rounds if rounds % 2 else rounds + 1


@dataclass(frozen=True)
class ApproxConfig:
    epsilon: float = 0.8
    delta: float = 0.2
    seed: int = 0
    thresh: int = field(init=False)
    rounds: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "thresh", derive_thresh(self.epsilon))
        object.__setattr__(self, "rounds", derive_rounds(self.delta))

    def describe(self) -> dict:
        return {
            "epsilon": self.epsilon,
            "delta": self.delta,
            "seed": self.seed,
            "thresh": self.thresh,
            "rounds": self.rounds,
            "thresh_constant": THRESH_CONSTANT,
            "rounds_constant": ROUNDS_CONSTANT,
        }


def round_rng(seed: int, round_index: int) -> np.random.Generator:
    """Independent PCG64 stream for one round, derived from the run seed."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(round_index,))))


def _parity(x: np.ndarray) -> np.ndarray:
    for shift in (32, 16, 8, 4, 2, 1):
        x = x ^ (x >> shift)
    return x & 1


def bounded_count(
    p: Program,
    xors: Sequence[XorConstraint],
    thresh: int,
    max_decisions: int | None = None,
    answer_masks: np.ndarray | None = None,
) -> int:
    """``min(thresh, #answer sets satisfying every xor)``.

    Normal programs are searched directly.  Disjunctive programs filter the
    brute-force answer sets; pass ``answer_masks`` to reuse a previous sweep.
    """
    if thresh < 1:
        raise ValueError("thresh must be at least 1")
    if is_normal(p):
        search = CompletionSearch(p, xors=xors, max_decisions=max_decisions)
        return search.run(limit=thresh)
    masks = answer_set_masks(p) if answer_masks is None else answer_masks
    keep = np.ones(masks.shape[0], dtype=bool)
    for x in xors:
        xm = np.int64(sum(1 << (v - 1) for v in x.vars))
        keep &= _parity(masks & xm) == x.rhs
    return min(thresh, int(keep.sum()))


def _find_m(cell: Callable[[int], int], thresh: int, n: int, start: int) -> int | None:
    """Smallest m in [1, n] with cell(m) < thresh, given cell(0) >= thresh."""
    start = min(max(start, 1), n)
    if cell(start) < thresh:
        lo, hi, step = 0, start, 1
        while hi - step > 0:
            if cell(hi - step) >= thresh:
                lo = hi - step
                break
            hi -= step
            step *= 2
    else:
        lo, step = start, 1
        while True:
            cand = min(lo + step, n)
            if cand == lo:
                return None
            if cell(cand) < thresh:
                hi = cand
                break
            lo = cand
            step *= 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if cell(mid) < thresh:
            hi = mid
        else:
            lo = mid
    return hi


def _run_round(p: Program, cfg: ApproxConfig, index: int, start_m: int, max_decisions,
               answer_masks=None):
    n = max(p.num_atoms, 1)
    xors = sample_xor_set([a + 1 for a in range(p.num_atoms)], n, round_rng(cfg.seed, index))
    cache: dict[int, int] = {}

    def cell(m: int) -> int:
        if m not in cache:
            cache[m] = bounded_count(p, xors[:m], cfg.thresh, max_decisions, answer_masks)
        return cache[m]

    m = _find_m(cell, cfg.thresh, n, start_m)
    probes = sorted(cache.items())
    if m is None:
        return {"round": index, "m": None, "cell_count": None, "estimate": None,
                "probes": probes, "xors": xors}
    c = cache[m]
    return {"round": index, "m": m, "cell_count": c, "estimate": c << m,
            "probes": probes, "xors": xors[:m]}


def _round_job(args):
    return _run_round(*args)


def approx_count(
    p: Program,
    cfg: ApproxConfig,
    max_decisions: int | None = None,
    workers: int = 1,
    on_round: Callable[[dict], None] | None = None,
) -> CountResult:
    start = time.perf_counter()
    meta = cfg.describe()
    masks = None if is_normal(p) else answer_set_masks(p)
    base = bounded_count(p, [], cfg.thresh, max_decisions, masks)
    if base < cfg.thresh:
        meta.update(final_m=0, round_telemetry=[])
        return CountResult(base, "exact", {"bounded_count_calls": 1}, meta,
                           time.perf_counter() - start)

    if workers > 1:
        jobs = [(p, cfg, i, 1, max_decisions, masks) for i in range(cfg.rounds)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_round_job, jobs))
    else:
        results, m = [], 1
        for i in range(cfg.rounds):
            res = _run_round(p, cfg, i, m, max_decisions, masks)
            if res["m"] is not None:
                m = res["m"]
            results.append(res)

    telemetry, estimates, calls = [], [], 1
    for res in results:
        if on_round is not None:
            on_round(res)
        calls += len(res["probes"])
        telemetry.append({"round": res["round"], "m": res["m"], "cell_count": res["cell_count"]})
        if res["estimate"] is not None:
            estimates.append(res["estimate"])
    if not estimates:
        raise Incomplete("no round found a small enough cell")
    final_m = next(r["m"] for r in reversed(results) if r["m"] is not None)
    meta.update(final_m=final_m, round_telemetry=telemetry,
                failed_rounds=cfg.rounds - len(estimates))
    stats = {"bounded_count_calls": calls}
    return CountResult(statistics.median_low(estimates), "approx", stats, meta,
                       time.perf_counter() - start)
