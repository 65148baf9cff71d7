"""FD-graph, SCC condensation and the greedy solver for simple FD sets.

With single-attribute left sides the closure of ``{v}`` is exactly the set
of vertices reachable from ``v``, so TCAND becomes set cover over the
target sets reachable from each strongly connected component. Only source
components of the condensation are worth picking: every other component is
reachable from some source and reaches a subset of what that source does.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import InstanceError, NotSimpleError, UncoverableError
from .fd import FDSet, Instance, from_mask, to_mask

__all__ = [
    "FDGraph",
    "CondensedGraph",
    "build_fd_graph",
    "strongly_connected_components",
    "scc_condense",
    "is_simple",
    "greedy_set_cover",
    "solve_simple",
    "to_dot",
]


@dataclass(frozen=True)
class FDGraph:
    n: int
    succ: tuple[tuple[int, ...], ...]

    @property
    def edges(self) -> frozenset[tuple[int, int]]:
        return frozenset((u, v) for u, out in enumerate(self.succ) for v in out)


@dataclass(frozen=True)
class CondensedGraph:
    """SCC DAG. Components are listed in topological order (sources first)."""

    components: tuple[frozenset[int], ...]
    component_of: tuple[int, ...]
    dag: frozenset[tuple[int, int]]
    reach: tuple[frozenset[int], ...]

    @property
    def sources(self) -> tuple[int, ...]:
        has_pred = {v for _, v in self.dag}
        return tuple(c for c in range(len(self.components)) if c not in has_pred)


def build_fd_graph(fds: FDSet) -> FDGraph:
    """Edge ``(i, j)`` whenever some FD ``X -> j`` has ``i`` in ``X``."""
    out: list[set[int]] = [set() for _ in range(fds.n)]
    for fd in fds:
        for i in fd.lhs:
            out[i].add(fd.rhs)
    return FDGraph(fds.n, tuple(tuple(sorted(s)) for s in out))


def strongly_connected_components(succ: Sequence[Sequence[int]]) -> list[list[int]]:
    """Tarjan's algorithm without recursion. Components come out sinks first."""
    n = len(succ)
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    sccs: list[list[int]] = []
    counter = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            v, i = work[-1]
            if i == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            if i < len(succ[v]):
                work[-1] = (v, i + 1)
                w = succ[v][i]
                if index[w] == -1:
                    work.append((w, 0))
                elif on_stack[w]:
                    low[v] = min(low[v], index[w])
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                sccs.append(sorted(comp))
    return sccs


def scc_condense(g: FDGraph, targets: Iterable[int] | None = None) -> CondensedGraph:
    """Condense ``g`` and attach to each component the targets it reaches
    (all vertices when ``targets`` is omitted)."""
    comps = strongly_connected_components(g.succ)
    comps.reverse()
    comp_of = [0] * g.n
    for c, comp in enumerate(comps):
        for v in comp:
            comp_of[v] = c
    dag = set()
    for u, out in enumerate(g.succ):
        for v in out:
            if comp_of[u] != comp_of[v]:
                dag.add((comp_of[u], comp_of[v]))
    goal = (1 << g.n) - 1 if targets is None else to_mask(targets)
    children: list[list[int]] = [[] for _ in comps]
    for a, b in dag:
        children[a].append(b)
    reach = [0] * len(comps)
    for c in range(len(comps) - 1, -1, -1):
        m = to_mask(comps[c]) & goal
        for d in children[c]:
            m |= reach[d]
        reach[c] = m
    return CondensedGraph(
        tuple(frozenset(c) for c in comps),
        tuple(comp_of),
        frozenset(dag),
        tuple(from_mask(m) for m in reach),
    )


def is_simple(fds: FDSet) -> bool:
    return all(len(fd.lhs) == 1 for fd in fds)


def greedy_set_cover(universe: Iterable, sets: Sequence[Iterable]) -> list[int]:
    """Classic greedy: take the set covering most uncovered elements, lowest index on ties."""
    uncovered = set(universe)
    sets = [frozenset(s) for s in sets]
    union = set().union(*sets) if sets else set()
    if not uncovered <= union:
        raise UncoverableError("sets do not cover the universe")
    chosen = []
    while uncovered:
        best, gain = -1, 0
        for i, s in enumerate(sets):
            k = len(s & uncovered)
            if k > gain:
                best, gain = i, k
        chosen.append(best)
        uncovered -= sets[best]
    return chosen


def solve_simple(inst: Instance) -> frozenset[int]:
    """Greedy set cover over source components (one representative each)."""
    if not is_simple(inst.fds):
        raise NotSimpleError("every FD must have exactly one attribute on its left side")
    if inst.rounds < max(inst.n, 1):
        raise InstanceError("the simple-FD solver assumes unbounded inference (rounds = n)")
    if not inst.targets:
        return frozenset()
    cg = scc_condense(build_fd_graph(inst.fds), inst.targets)
    cands = [c for c in cg.sources if cg.reach[c]]
    # drop sources dominated by another source's reach set
    keep = []
    for c in cands:
        dominated = any(
            cg.reach[c] < cg.reach[d] or (cg.reach[c] == cg.reach[d] and d < c)
            for d in cands
            if d != c
        )
        if not dominated:
            keep.append(c)
    picked = greedy_set_cover(inst.targets, [cg.reach[c] for c in keep])
    return frozenset(min(cg.components[keep[i]]) for i in picked)


def to_dot(graph, names: Sequence[str] | None = None) -> str:
    """Graphviz text for an :class:`FDGraph` or :class:`CondensedGraph`."""

    def label(v):
        return names[v] if names else str(v)

    lines = ["digraph fd {"]
    if isinstance(graph, FDGraph):
        for v in range(graph.n):
            lines.append(f'  {v} [label="{label(v)}"];')
        for u, v in sorted(graph.edges):
            lines.append(f"  {u} -> {v};")
    else:
        for c, comp in enumerate(graph.components):
            members = ",".join(label(v) for v in sorted(comp))
            lines.append(f'  c{c} [label="{{{members}}}"];')
        for a, b in sorted(graph.dag):
            lines.append(f"  c{a} -> c{b};")
    lines.append("}")
    return "\n".join(lines) + "\n"
