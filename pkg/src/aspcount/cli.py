"""``aspcount`` command line interface.

Exit codes: 0 success, 1 usage or parse error, 2 unsupported input or
incomplete run, 3 differential mismatch found by ``fuzz --check``.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor

from . import __version__, _kernels
from .approx import ApproxConfig, approx_count
from .completion import NotNormalProgram, clark_completion, export_dimacs
from .copyformula import build_copy_formula
from .depgraph import build_dep_graph, loop_atoms, scc_info
from .exact import CountResult, Incomplete, count_exact, count_filter_reference
from .fuzz import FuzzParams, differential_check, random_program
from .parity import format_xor
from .program import ParseError, is_constraint, is_disjunctive, is_normal, parse_program, render_program
from .semantics import AtomCapExceeded, count_bruteforce, enumerate_answer_sets

EXIT_OK, EXIT_USAGE, EXIT_UNSUPPORTED, EXIT_MISMATCH = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _read(path: str) -> tuple[str, str]:
    if path == "-":
        return sys.stdin.read(), "-"
    with open(path, encoding="utf-8") as fh:
        return fh.read(), path


def _load(path: str):
    text, name = _read(path)
    return parse_program(text), {"path": name, "sha256": hashlib.sha256(text.encode()).hexdigest()}


def _emit_json(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _report(command: str, source: dict, result: CountResult, config: dict, started: float) -> dict:
    return {
        "tool": "aspcount",
        "version": __version__,
        "command": command,
        "input": source,
        "mode": result.mode,
        "config": config,
        "result": result.to_dict(),
        "wall_time": {"total": time.perf_counter() - started, "count": result.elapsed},
    }


def cmd_count(args) -> int:
    started = time.perf_counter()
    program, source = _load(args.path)
    if args.mode == "brute":
        t0 = time.perf_counter()
        result = CountResult(count_bruteforce(program, args.cap), "bruteforce",
                             elapsed=time.perf_counter() - t0)
    elif not is_normal(program):
        print("error: disjunctive program; use `count --mode brute` or `approx`", file=sys.stderr)
        return EXIT_UNSUPPORTED
    elif args.mode == "filter":
        result = count_filter_reference(program, args.cap)
    else:
        result = count_exact(program, max_decisions=args.max_decisions)
    if args.json:
        config = {"mode": args.mode, "max_decisions": args.max_decisions, "cap": args.cap,
                  "backend": _kernels.BACKEND}
        _emit_json(_report("count", source, result, config, started))
    else:
        print(result.count)
    return EXIT_OK


def cmd_approx(args) -> int:
    started = time.perf_counter()
    try:
        cfg = ApproxConfig(args.epsilon, args.delta, args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    program, source = _load(args.path)

    def dump(res):
        print(f"c round {res['round']} m={res['m']}", file=sys.stderr)
        for x in res["xors"]:
            print(format_xor(x), file=sys.stderr)

    result = approx_count(program, cfg, max_decisions=args.max_decisions,
                          workers=args.threads, on_round=dump if args.dump_xors else None)
    if args.json:
        config = cfg.describe() | {"max_decisions": args.max_decisions}
        _emit_json(_report("approx", source, result, config, started))
    else:
        print(result.count)
        print(
            f"c epsilon={cfg.epsilon} delta={cfg.delta} seed={cfg.seed} "
            f"thresh={cfg.thresh} rounds={cfg.rounds} mode={result.mode}",
            file=sys.stderr,
        )
    return EXIT_OK


def cmd_enumerate(args) -> int:
    program, source = _load(args.path)
    sets = [sorted(program.names(s)) for s in enumerate_answer_sets(program, args.cap)]
    if args.json:
        _emit_json({"tool": "aspcount", "version": __version__, "command": "enumerate",
                    "input": source, "answer_sets": sets, "count": str(len(sets))})
    else:
        for s in sets:
            print("{" + ", ".join(s) + "}")
    return EXIT_OK


def program_stats(program) -> dict:
    info = scc_info(build_dep_graph(program))
    loops = loop_atoms(program)
    return {
        "atoms": program.num_atoms,
        "rules": len(program.rules),
        "constraints": sum(1 for r in program.rules if is_constraint(r)),
        "normal": is_normal(program),
        "disjunctive": is_disjunctive(program),
        "tight": not loops,
        "loop_atoms": [program.atoms[a] for a in sorted(loops)],
        "scc_sizes": sorted((len(m) for m in info.members), reverse=True),
        "cyclic_scc_sizes": sorted(
            (len(m) for m, c in zip(info.members, info.cyclic) if c), reverse=True
        ),
    }


def cmd_stats(args) -> int:
    program, source = _load(args.path)
    _emit_json({"tool": "aspcount", "version": __version__, "command": "stats",
                "input": source, **program_stats(program)})
    return EXIT_OK


def cmd_translate(args) -> int:
    program, _ = _load(args.path)
    f = clark_completion(program)
    extra, copy_vars = (), ()
    if args.with_copy:
        cf = build_copy_formula(program, loop_atoms(program), f.var_map)
        extra, copy_vars = cf.clauses, cf.copy_vars
    if args.output and args.output != "-":
        with open(args.output, "w", encoding="utf-8") as fh:
            export_dimacs(f, fh, extra, copy_vars)
    else:
        export_dimacs(f, sys.stdout, extra, copy_vars)
    return EXIT_OK


def cmd_fuzz(args) -> int:
    prm = FuzzParams(atoms=args.atoms, rules=args.rules, neg_prob=args.neg_prob,
                     disj_prob=args.disj_prob, cycle_prob=args.cycle_prob)
    if args.atoms < 1 or args.rules < 1 or args.count < 1:
        raise UsageError("--atoms, --rules and --count must be positive")
    rng = random.Random(args.seed)
    programs = [random_program(rng, prm) for _ in range(args.count)]
    if not args.check:
        for i, p in enumerate(programs):
            sys.stdout.write(f"% program {i}\n{render_program(p)}")
        return EXIT_OK
    if args.threads > 1:
        with ProcessPoolExecutor(max_workers=args.threads) as pool:
            results = list(pool.map(differential_check, programs))
    else:
        results = [differential_check(p) for p in programs]
    mismatches = []
    for i, (p, res) in enumerate(zip(programs, results)):
        if not res["ok"]:
            path = os.path.join(args.out_dir, f"fuzz-mismatch-{args.seed}-{i}.lp")
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(f"% {json.dumps(res, sort_keys=True)}\n{render_program(p)}")
            mismatches.append({"index": i, "reproducer": path, **res})
    summary = {
        "programs": len(programs),
        "normal": sum(r["normal"] for r in results),
        "non_tight": sum(not r["tight"] for r in results),
        "mismatches": mismatches,
    }
    if args.json:
        _emit_json({"tool": "aspcount", "version": __version__, "command": "fuzz",
                    "config": vars(prm) | {"seed": args.seed, "count": args.count}, **summary})
    else:
        print(f"checked {len(programs)} programs, {len(mismatches)} mismatches")
        for m in mismatches:
            print(f"mismatch in program {m['index']}: {m['reproducer']}", file=sys.stderr)
    return EXIT_MISMATCH if mismatches else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="aspcount", description="Answer set counting for ground programs.")
    parser.add_argument("--version", action="version", version=f"aspcount {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("count", help="count answer sets exactly")
    p.add_argument("path", help="program file, or - for stdin")
    p.add_argument("--mode", choices=("exact", "brute", "filter"), default="exact")
    p.add_argument("--max-decisions", type=int, default=None)
    p.add_argument("--cap", type=int, default=None, help="atom cap for brute/filter modes")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("approx", help="(epsilon, delta) approximate count")
    p.add_argument("path")
    p.add_argument("--epsilon", type=float, default=0.8)
    p.add_argument("--delta", type=float, default=0.2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-decisions", type=int, default=None)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--dump-xors", action="store_true", help="write sampled XORs to stderr")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_approx)

    p = sub.add_parser("enumerate", help="list answer sets by brute force")
    p.add_argument("path")
    p.add_argument("--cap", type=int, default=None)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("stats", help="structural statistics as JSON")
    p.add_argument("path")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("translate", help="write the completion as DIMACS CNF")
    p.add_argument("path")
    p.add_argument("-o", "--output", default=None)
    p.add_argument("--with-copy", action="store_true", help="append copy formula clauses")
    p.set_defaults(func=cmd_translate)

    p = sub.add_parser("fuzz", help="generate random programs, optionally cross-check counters")
    p.add_argument("--atoms", type=int, default=8)
    p.add_argument("--rules", type=int, default=12)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--neg-prob", type=float, default=0.3)
    p.add_argument("--disj-prob", type=float, default=0.0)
    p.add_argument("--cycle-prob", type=float, default=0.6)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--check", action="store_true")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out-dir", default=".")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_fuzz)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, UsageError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NotNormalProgram, AtomCapExceeded, Incomplete) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED


if __name__ == "__main__":
    sys.exit(main())
