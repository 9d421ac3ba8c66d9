"""Compare numba and numpy backends of the brute-force sweep kernels.

    python benchmarks/bench_kernels.py [--sizes 10 14 18] [--repeat 3]
"""

import argparse
import random
import time

import numpy as np

from aspcount import _kernels
from aspcount.completion import clark_completion
from aspcount.fuzz import FuzzParams, random_program


def _time(fn, args, repeat):
    fn(*args)  # warm-up (triggers JIT compilation for numba)
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", type=int, nargs="+", default=[10, 14, 18])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    backends = [b for b in ("numba", "numpy") if b in _kernels.BACKENDS]
    print(f"{'kernel':<12}{'atoms':>6}" + "".join(f"{b + ' [s]':>14}" for b in backends) + f"{'speedup':>10}")
    rng = random.Random(args.seed)
    for n in args.sizes:
        p = random_program(rng, FuzzParams(atoms=n, rules=2 * n, choice_prob=0.5))
        masks = _kernels.rule_masks(p)
        f = clark_completion(p)
        ptr, lits = _kernels.cnf_arrays(f.clauses)
        aptr, alits = _kernels.cnf_arrays(f.var_map.aux_body)
        aux = np.arange(p.num_atoms + 1, f.num_vars + 1, dtype=np.int64)
        cases = {
            "normal": (0, (*masks, p.num_atoms)),
            "cnf": (2, (p.num_atoms, f.num_vars, ptr, lits, aux, aptr, alits)),
        }
        if n <= 14:
            cases["disjunctive"] = (1, (*masks, p.num_atoms))
        for name, (k, kargs) in cases.items():
            times, outs = [], []
            for b in backends:
                t, out = _time(_kernels.BACKENDS[b][k], kargs, args.repeat)
                times.append(t)
                outs.append(out)
            assert all(np.array_equal(outs[0], o) for o in outs[1:])
            speed = f"{times[-1] / times[0]:>9.1f}x" if len(times) == 2 else ""
            print(f"{name:<12}{p.num_atoms:>6}" + "".join(f"{t:>14.4f}" for t in times) + speed)


if __name__ == "__main__":
    main()
