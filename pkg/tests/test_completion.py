import io
import itertools
import random

import pytest

from aspcount.completion import (
    CnfFormula,
    NotNormalProgram,
    VarClass,
    VarMap,
    clark_completion,
    completion_model_count,
    completion_models,
    export_dimacs,
)
from aspcount.depgraph import is_tight
from aspcount.fuzz import FuzzParams, generate_corpus, random_program
from aspcount.program import parse_program
from aspcount.semantics import count_bruteforce, enumerate_answer_sets


def all_models(f):
    """Truth table over every variable, aux included."""
    out = []
    for bits in itertools.product((False, True), repeat=f.num_vars):
        val = (None,) + bits
        if all(any(val[abs(l)] == (l > 0) for l in c) for c in f.clauses):
            out.append(bits)
    return out


def atom_projection(f, models):
    n = f.var_map.num_atoms
    return {frozenset(i for i in range(n) if m[i]) for m in models}


def read_dimacs(text):
    clauses, header = [], None
    for line in text.splitlines():
        if line.startswith("c"):
            continue
        if line.startswith("p cnf"):
            header = tuple(map(int, line.split()[2:]))
            continue
        lits = list(map(int, line.split()))
        assert lits[-1] == 0
        clauses.append(lits[:-1])
    return header, clauses


def dimacs_model_count(text):
    (nv, nc), clauses = read_dimacs(text)
    assert len(clauses) == nc
    return sum(
        all(any(bits[abs(l) - 1] == (l > 0) for l in c) for c in clauses)
        for bits in itertools.product((False, True), repeat=nv)
    )


def test_fact_is_unit():
    f = clark_completion(parse_program("a."))
    assert f.clauses == ((1,),) and f.num_vars == 1
    assert completion_model_count(f) == 1


def test_negative_body():
    p = parse_program("a :- not b.")
    f = clark_completion(p)
    assert atom_projection(f, all_models(f)) == {p.interpretation(["a"])}


def test_two_cycle_over_approximates():
    p = parse_program("a :- b. b :- a.")
    f = clark_completion(p)
    assert atom_projection(f, all_models(f)) == {frozenset(), p.interpretation(["a", "b"])}
    assert completion_model_count(f) == 2
    assert count_bruteforce(p) == 1


@pytest.mark.parametrize(
    "text, count", [("a :- not b. b :- not a.", 2), ("a :- b. b :- a.", 2), ("a.", 1)]
)
def test_completion_model_count_examples(text, count):
    assert completion_model_count(clark_completion(parse_program(text))) == count


def test_aux_only_for_long_bodies_and_layout():
    p = parse_program("a :- b, not c. b :- c. c :- not a. :- a, b, c.")
    f = clark_completion(p)
    vm = f.var_map
    assert vm.aux_rule == (0,)
    assert [vm.var_class(v) for v in range(1, f.num_vars + 1)] == [VarClass.ATOM] * 3 + [VarClass.BODY_AUX]
    assert vm.var_class(f.num_vars + 1) is VarClass.COPY
    assert all(len(set(c)) == len(c) for c in f.clauses)


def test_rejects_disjunctive():
    with pytest.raises(NotNormalProgram):
        clark_completion(parse_program("a | b."))


def test_constraint_only_atoms_are_false():
    p = parse_program(":- x, not y.")
    f = clark_completion(p)
    assert (-1,) in f.clauses and (-2,) in f.clauses


def _corpus():
    return generate_corpus(17, 120, max_atoms=8, max_rules=12)


def test_table_matches_kernel_and_functional_dependence():
    for p in _corpus():
        f = clark_completion(p)
        if f.num_vars > 16:
            continue
        models = all_models(f)
        proj = atom_projection(f, models)
        # aux values never vary once atoms are fixed
        assert len(proj) == len(models)
        flags = completion_models(f)
        kernel = {frozenset(i for i in range(p.num_atoms) if m >> i & 1) for m in flags.nonzero()[0]}
        assert kernel == proj


def test_answer_sets_satisfy_completion():
    for p in _corpus():
        flags = completion_models(clark_completion(p))
        for m in enumerate_answer_sets(p):
            assert flags[sum(1 << a for a in m)]


def test_tight_programs_count_exactly():
    seen = 0
    for p in _corpus():
        if is_tight(p):
            seen += 1
            assert completion_model_count(clark_completion(p)) == count_bruteforce(p)
    assert seen > 5


def test_dimacs_format():
    f = CnfFormula(2, ((1, -2),), VarMap(("a", "b"), (), ()))
    out = io.StringIO()
    export_dimacs(f, out)
    lines = out.getvalue().splitlines()
    assert "p cnf 2 1" in lines and lines[-1] == "1 -2 0"
    assert lines[:2] == ["c atom a 1", "c atom b 2"]


def test_dimacs_empty():
    out = io.StringIO()
    export_dimacs(CnfFormula(0, (), VarMap((), (), ())), out)
    assert out.getvalue() == "p cnf 0 0\n"


def test_dimacs_model_count_and_determinism():
    p = parse_program("a :- not b.")
    a, b = io.StringIO(), io.StringIO()
    export_dimacs(clark_completion(p), a)
    export_dimacs(clark_completion(parse_program("a :- not b.")), b)
    assert a.getvalue() == b.getvalue()
    assert dimacs_model_count(a.getvalue()) == 1


def test_dimacs_counts_match_on_random_programs():
    rng = random.Random(2)
    for _ in range(15):
        p = random_program(rng, FuzzParams(atoms=rng.randint(1, 6), rules=rng.randint(1, 7)))
        f = clark_completion(p)
        if f.num_vars > 14:
            continue
        out = io.StringIO()
        export_dimacs(f, out)
        assert dimacs_model_count(out.getvalue()) == completion_model_count(f)
