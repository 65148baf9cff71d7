"""LP rounding: threshold rounding on the layered relaxation and randomized
rounding on the single-round relaxation with equitable colouring.

Randomized rounding works per target ``t``. The left sides of FDs into
``t`` (plus the virtual self-FD ``{t}``) form a meta-graph whose edges join
intersecting left sides. An equitable colouring splits them into
independent classes; the heaviest class carries at least a ``1/(k+1)``
share of ``t``'s covering row, and its left sides share no attribute, so
their survival events are independent under per-attribute coin tossing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import networkx as nx
import numpy as np

from .errors import DegreeExceeded, InstanceError
from .fd import FDSet, Instance, stats
from .lp import LPSolution, build_layered_lp, build_one_round_lp, solve_lp

__all__ = [
    "MetaGraph",
    "Coloring",
    "ClassChoice",
    "round_deterministic",
    "threshold",
    "build_meta_graph",
    "equitable_coloring",
    "coin_count",
    "choose_class",
    "round_randomized",
    "round_randomized_d",
]

ROUND_TOL = 1e-9


def threshold(f: int, rounds: int) -> float:
    return 1.0 / (f + 1) ** rounds


def round_deterministic(inst: Instance, solution: LPSolution | None = None) -> frozenset[int]:
    """Keep every attribute whose top-layer LP value reaches ``1/(f+1)^D``.

    Each covering inequality has at most ``f+1`` summands (the self term
    plus one per left side), so one of them carries a ``1/(f+1)`` share;
    repeating the argument down ``D`` layers shows the kept set is feasible.
    """
    if solution is None:
        solution = solve_lp(build_layered_lp(inst))
    tau = threshold(stats(inst.fds).f, inst.rounds)
    top = solution.model.top_layer
    return frozenset(i for i in range(inst.n) if solution.x(i, top) >= tau - ROUND_TOL)


@dataclass(frozen=True)
class MetaGraph:
    target: int
    nodes: tuple[frozenset[int], ...]
    adjacency: tuple[frozenset[int], ...]
    virtual: int  # index of the self-FD node {t}

    @property
    def max_degree(self) -> int:
        return max((len(a) for a in self.adjacency), default=0)


@dataclass(frozen=True)
class Coloring:
    colors: tuple[int, ...]
    num_colors: int

    @property
    def classes(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.num_colors)]
        for v, c in enumerate(self.colors):
            out[c].append(v)
        return out

    @property
    def class_sizes(self) -> list[int]:
        return [len(c) for c in self.classes]


def build_meta_graph(t: int, fds: FDSet) -> MetaGraph:
    """Distinct non-trivial left sides into ``t`` plus ``{t}``; edges join
    intersecting ones. Left sides containing ``t`` are skipped, as the LP does."""
    nodes = [ls for ls in fds.left_sides_of(t) if t not in ls]
    nodes.append(frozenset({t}))
    virtual = len(nodes) - 1
    adj = [
        frozenset(j for j, other in enumerate(nodes) if j != i and ls & other)
        for i, ls in enumerate(nodes)
    ]
    return MetaGraph(t, tuple(nodes), tuple(adj), virtual)


def equitable_coloring(adjacency: Sequence, k: int) -> Coloring:
    """Proper ``(k+1)``-colouring whose class sizes differ by at most one.

    ``adjacency[v]`` lists the neighbours of node ``v``. Uses the
    Kierstead-Kostochka-Mydlarz-Szemeredi procedure from networkx.
    """
    n = len(adjacency)
    g = nx.Graph()
    g.add_nodes_from(range(n))
    for u, nbrs in enumerate(adjacency):
        for v in nbrs:
            if u != v:
                g.add_edge(u, int(v))
    deg = max((d for _, d in g.degree()), default=0)
    if deg > k:
        raise DegreeExceeded(f"max degree {deg} exceeds bound {k}")
    colors = nx.coloring.equitable_color(g, k + 1) if n else {}
    col = Coloring(tuple(colors[v] for v in range(n)), k + 1)
    assert all(col.colors[u] != col.colors[v] for u, v in g.edges()), "improper colouring"
    sizes = col.class_sizes
    assert max(sizes) - min(sizes) <= 1, f"unbalanced classes {sizes}"
    return col


def coin_count(c: float, delta: int, n: int) -> int:
    """``ceil(c (delta+1) ln n)`` coins per attribute, at least one."""
    if n <= 1:
        return 1
    return max(1, math.ceil(c * (delta + 1) * math.log(n)))


@dataclass(frozen=True)
class ClassChoice:
    target: int
    left_sides: tuple[frozenset[int], ...]
    weight: float
    num_colors: int

    @property
    def attributes(self) -> frozenset[int]:
        return frozenset().union(*self.left_sides) if self.left_sides else frozenset()


def choose_class(t: int, fds: FDSet, solution: LPSolution, delta: int) -> ClassChoice:
    """Heaviest colour class of ``t``'s meta-graph (lowest index on ties)."""
    meta = build_meta_graph(t, fds)
    k = delta
    coloring = equitable_coloring(meta.adjacency, k)
    weights = []
    for v, ls in enumerate(meta.nodes):
        w = solution.x(t, 0) if v == meta.virtual else solution.z(ls, 1)
        weights.append(w)
    best, best_w = 0, -1.0
    for j, cls in enumerate(coloring.classes):
        w = sum(weights[v] for v in cls)
        if w > best_w + 1e-12:
            best, best_w = j, w
    assert best_w >= 1.0 / (k + 1) - ROUND_TOL, "averaging argument violated"
    cls = coloring.classes[best]
    return ClassChoice(t, tuple(meta.nodes[v] for v in cls), best_w, k + 1)


def _rng(seed: int, stage: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, stage])))


def _round_once(inst: Instance, seed: int, c: float, stage: int, solution=None) -> frozenset[int]:
    if solution is None:
        solution = solve_lp(build_one_round_lp(inst))
    if not inst.targets:
        return frozenset()
    delta = stats(inst.fds).delta
    coins = coin_count(c, delta, inst.n)
    # one coin sequence per attribute, shared by all targets
    draws = _rng(seed, stage).random((inst.n, coins))
    y = np.array([solution.x(j, 0) for j in range(inst.n)])
    success = (draws < y[:, None]).any(axis=1)
    out = set()
    for t in sorted(inst.targets):
        choice = choose_class(t, inst.fds, solution, delta)
        out |= {k for k in choice.attributes if success[k]}
    return frozenset(out)


def round_randomized(inst: Instance, seed: int = 0, c: float = 2.0,
                     solution: LPSolution | None = None) -> frozenset[int]:
    """Randomized rounding for 1-round instances. The output covers the
    targets with high probability only; check it with ``is_feasible``."""
    if inst.rounds != 1:
        raise InstanceError("randomized rounding needs rounds = 1; use round_randomized_d")
    if c < 1:
        raise InstanceError("oversampling constant c must be at least 1")
    return _round_once(inst, seed, c, 0, solution)


def round_randomized_d(inst: Instance, seed: int = 0, c: float = 2.0) -> frozenset[int]:
    """D rounds of randomized rounding: round ``r``'s selection becomes the
    target set of round ``r+1``; the last selection is returned."""
    if c < 1:
        raise InstanceError("oversampling constant c must be at least 1")
    current = inst.targets
    for stage in range(inst.rounds):
        if not current:
            return frozenset()
        layer = Instance(inst.fds, current, 1, inst.names)
        current = _round_once(layer, seed, c, stage)
    return current
