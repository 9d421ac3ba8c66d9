"""Positive dependency graph, strongly connected components, loop atoms."""

from __future__ import annotations

from dataclasses import dataclass

from .program import Program

__all__ = ["DepGraph", "SccInfo", "build_dep_graph", "scc_info", "loop_atoms", "is_tight"]


@dataclass(frozen=True)
class DepGraph:
    num_nodes: int
    edges: tuple[tuple[int, ...], ...]  # successors per atom id, sorted

    def edge_set(self) -> set[tuple[int, int]]:
        return {(a, b) for a, succ in enumerate(self.edges) for b in succ}


@dataclass(frozen=True)
class SccInfo:
    component: tuple[int, ...]  # component id per atom
    members: tuple[tuple[int, ...], ...]
    cyclic: tuple[bool, ...]


def build_dep_graph(p: Program) -> DepGraph:
    succ: list[set[int]] = [set() for _ in range(p.num_atoms)]
    for r in p.rules:
        for h in r.head:
            succ[h] |= r.pos
    return DepGraph(p.num_atoms, tuple(tuple(sorted(s)) for s in succ))


def scc_info(g: DepGraph) -> SccInfo:
    """Tarjan's algorithm with an explicit stack."""
    n = g.num_nodes
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    comp = [-1] * n
    members: list[tuple[int, ...]] = []
    counter = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            v, i = work.pop()
            if i == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            succ = g.edges[v]
            while i < len(succ):
                w = succ[i]
                if index[w] == -1:
                    work.append((v, i + 1))
                    work.append((w, 0))
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
                i += 1
            else:
                if low[v] == index[v]:
                    group = []
                    while True:
                        w = stack.pop()
                        on_stack[w] = False
                        comp[w] = len(members)
                        group.append(w)
                        if w == v:
                            break
                    members.append(tuple(sorted(group)))
                if work:
                    parent = work[-1][0]
                    low[parent] = min(low[parent], low[v])
    cyclic = tuple(
        len(ms) > 1 or ms[0] in g.edges[ms[0]] for ms in members
    )
    return SccInfo(tuple(comp), tuple(members), cyclic)


def loop_atoms(p: Program) -> frozenset[int]:
    """Atoms on a cycle of the head-to-positive-body graph (self-loops included)."""
    info = scc_info(build_dep_graph(p))
    return frozenset(a for a, c in enumerate(info.component) if info.cyclic[c])


def is_tight(p: Program) -> bool:
    return not loop_atoms(p)
