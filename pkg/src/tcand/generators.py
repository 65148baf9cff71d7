"""Instance generators: layered integrality-gap family, vertex-cover
encodings and seeded random instances for fuzzing."""

from __future__ import annotations

import numpy as np

from .errors import InstanceError
from .fd import FD, FDSet, Instance

__all__ = ["gap_pairs", "gen_gap_instance", "gen_vc_instance", "gen_random_instance"]


def gap_pairs(g: int) -> list[list[tuple[int, int]]]:
    """Split the pairs of ``range(g)`` among ``g`` owners, owner ``k`` taking
    ``{k, k+j mod g}`` for ``j = 1 .. (g-1)//2`` (plus ``{k, k+g/2}`` when
    ``g`` is even and ``k < g/2``).

    Every pair is used once and each owner gets ``floor`` or ``ceil`` of
    ``C(g,2)/g`` pairs. All of owner ``k``'s pairs contain ``k``, so
    dropping any one lower-layer variable starves one upper variable.
    """
    owned: list[list[tuple[int, int]]] = [[] for _ in range(g)]
    for k in range(g):
        for j in range(1, (g - 1) // 2 + 1):
            owned[k].append(tuple(sorted((k, (k + j) % g))))
        if g % 2 == 0 and k < g // 2:
            owned[k].append((k, k + g // 2))
    return [sorted(p) for p in owned]


def gen_gap_instance(g: int = 5, rounds: int = 1) -> Instance:
    """Layers ``V(0) .. V(D)`` of width ``g``; each upper variable is implied by
    its share of the pairs below. Targets are the top layer."""
    if g < 3:
        raise InstanceError(f"layer width must be at least 3, got {g}")
    if rounds < 1:
        raise InstanceError("rounds must be at least 1")
    owned = gap_pairs(g)

    def var(i, r):
        return r * g + i

    fds = []
    for r in range(rounds):
        for k in range(g):
            for i, j in owned[k]:
                fds.append(FD(frozenset({var(i, r), var(j, r)}), var(k, r + 1)))
    n = g * (rounds + 1)
    names = tuple(f"v{i}_{r}" for r in range(rounds + 1) for i in range(g))
    targets = frozenset(var(i, rounds) for i in range(g))
    return Instance(FDSet(fds, n), targets, rounds, names)


def gen_vc_instance(edges, vertices=None) -> Instance:
    """One non-target per vertex and one target per edge ``e = (u, v)``, with
    the two FDs ``x_u -> x_e`` and ``x_v -> x_e``. Either endpoint derives
    the edge, so covers of the targets are vertex covers (``f = 2``)."""
    edges = [tuple(e) for e in edges]
    if vertices is None:
        vertices = sorted({v for e in edges for v in e}, key=repr)
    vertices = list(vertices)
    vid = {v: i for i, v in enumerate(vertices)}
    if len(vid) != len(vertices):
        raise InstanceError("duplicate vertex")
    nv = len(vertices)
    fds = []
    seen = set()
    for k, (u, v) in enumerate(edges):
        if u == v:
            raise InstanceError("self loops are not allowed")
        key = frozenset((u, v))
        if key in seen:
            raise InstanceError("duplicate edge")
        seen.add(key)
        fds.append(FD(frozenset({vid[u]}), nv + k))
        fds.append(FD(frozenset({vid[v]}), nv + k))
    names = tuple([f"x_{v}" for v in vertices] + [f"x_{u}_{v}" for u, v in edges])
    n = nv + len(edges)
    return Instance(FDSet(fds, n), frozenset(range(nv, n)), 1, names)


def gen_random_instance(
    n: int,
    m: int,
    max_lhs: int = 2,
    target_fraction: float = 0.3,
    seed: int = 0,
    rounds: int | None = None,
) -> Instance:
    """``m`` random FDs with left sides of uniform size in ``[1, max_lhs]``
    (rhs never on its own left side) and a random target subset."""
    if n < 1:
        raise InstanceError("n must be at least 1")
    if m < 0:
        raise InstanceError("m must be non-negative")
    if not 1 <= max_lhs <= n:
        raise InstanceError("max_lhs must lie in [1, n]")
    if not 0.0 <= target_fraction <= 1.0:
        raise InstanceError("target_fraction must lie in [0, 1]")
    if n == 1 and m > 0:
        raise InstanceError("a single attribute admits no non-trivial FD")
    rng = np.random.default_rng(seed)
    fds = []
    for _ in range(m):
        rhs = int(rng.integers(n))
        others = [a for a in range(n) if a != rhs]
        size = int(rng.integers(1, min(max_lhs, n - 1) + 1))
        lhs = rng.choice(others, size=size, replace=False)
        fds.append(FD(frozenset(int(a) for a in lhs), rhs))
    k = int(round(target_fraction * n))
    targets = frozenset(int(a) for a in rng.choice(n, size=k, replace=False))
    names = tuple(f"a{i}" for i in range(n))
    return Instance(FDSet(fds, n), targets, n if rounds is None else rounds, names)
