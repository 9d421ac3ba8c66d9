"""Answer set counting for ground programs: exact, brute-force and approximate."""

__version__ = "0.1.0"

from .approx import ApproxConfig, approx_count, bounded_count
from .completion import clark_completion, completion_model_count, export_dimacs
from .copyformula import build_copy_formula, copy_check, unit_propagate
from .depgraph import build_dep_graph, is_tight, loop_atoms
from .exact import CountResult, Incomplete, count_exact, count_filter_reference
from .program import Program, Rule, parse_program, render_program
from .semantics import count_bruteforce, enumerate_answer_sets, is_answer_set

__all__ = [
    "ApproxConfig",
    "CountResult",
    "Incomplete",
    "Program",
    "Rule",
    "approx_count",
    "bounded_count",
    "build_copy_formula",
    "build_dep_graph",
    "clark_completion",
    "completion_model_count",
    "copy_check",
    "count_bruteforce",
    "count_exact",
    "count_filter_reference",
    "enumerate_answer_sets",
    "export_dimacs",
    "is_answer_set",
    "is_tight",
    "loop_atoms",
    "parse_program",
    "render_program",
    "unit_propagate",
]
