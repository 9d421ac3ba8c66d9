import random

import pytest
from hypothesis import given, settings, strategies as st

from aspcount.depgraph import DepGraph, build_dep_graph, is_tight, loop_atoms, scc_info
from aspcount.program import parse_program


def edges_by_name(p):
    g = build_dep_graph(p)
    return {(p.atoms[a], p.atoms[b]) for a, b in g.edge_set()}


def test_dep_graph_examples():
    assert edges_by_name(parse_program("a :- b. b :- a.")) == {("a", "b"), ("b", "a")}
    assert edges_by_name(parse_program("a :- not b.")) == set()
    assert edges_by_name(parse_program("a | c :- b.")) == {("a", "b"), ("c", "b")}


@pytest.mark.parametrize(
    "text, loops",
    [
        ("a :- b. b :- a. c :- not d. d :- not c.", {"a", "b"}),
        ("a :- a.", {"a"}),
        ("a :- b. b :- c.", set()),
    ],
)
def test_loop_atoms_examples(text, loops):
    p = parse_program(text)
    assert {p.atoms[a] for a in loop_atoms(p)} == loops


@pytest.mark.parametrize(
    "text, tight", [("a :- not b. b :- not a.", True), ("a :- b. b :- a.", False), ("", True)]
)
def test_is_tight_examples(text, tight):
    assert is_tight(parse_program(text)) is tight


def _reach(g: DepGraph):
    n = g.num_nodes
    reach = [set() for _ in range(n)]
    for s in range(n):
        stack = list(g.edges[s])
        while stack:
            v = stack.pop()
            if v not in reach[s]:
                reach[s].add(v)
                stack.extend(g.edges[v])
    return reach


graphs = st.integers(1, 12).flatmap(
    lambda n: st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=3 * n).map(
        lambda es: DepGraph(n, tuple(tuple(sorted({b for a, b in es if a == v})) for v in range(n)))
    )
)


@settings(max_examples=300, deadline=None)
@given(graphs)
def test_scc_partition_matches_mutual_reachability(g):
    info = scc_info(g)
    reach = _reach(g)
    n = g.num_nodes
    assert sorted(a for ms in info.members for a in ms) == list(range(n))
    for a in range(n):
        for b in range(n):
            same = a == b or (b in reach[a] and a in reach[b])
            assert (info.component[a] == info.component[b]) == same
    for ms, cyc in zip(info.members, info.cyclic):
        # cyclic iff some member lies on a directed cycle
        assert cyc == any(a in reach[a] for a in ms)


def test_deep_chain_has_no_recursion_limit():
    n = 5000
    g = DepGraph(n, tuple((v + 1,) if v + 1 < n else (0,) for v in range(n)))
    info = scc_info(g)
    assert len(info.members) == 1 and info.cyclic[0]
