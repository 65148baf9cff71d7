"""Exhaustive solvers used as ground truth for every approximation.

Both searches walk subsets in cardinality-major, lexicographic-minor order
so their answers are deterministic. They are desk-scale tools and refuse
anything larger than :data:`MAX_EXACT`.
"""

from __future__ import annotations

from itertools import combinations

from .errors import InfeasibleError, TooLarge, UncoverableError
from .fd import Instance, _bounded_closure_mask, to_mask

__all__ = ["MAX_EXACT", "exact_tcand", "exact_rbsc"]

MAX_EXACT = 24


def exact_tcand(inst: Instance, limit: int = MAX_EXACT) -> frozenset[int]:
    """Minimum-cardinality ``X`` whose ``inst.rounds``-round closure covers the targets."""
    if inst.n > limit:
        raise TooLarge(f"exact search refuses n={inst.n} > {limit}")
    fds = inst.fds
    goal = to_mask(inst.targets)
    rounds = inst.rounds
    if _bounded_closure_mask((1 << inst.n) - 1, fds, rounds) & goal != goal:
        raise InfeasibleError("targets not derivable even from the whole universe")
    # attributes in no left side only help by being targets themselves
    useful = set(inst.targets)
    for fd in fds:
        useful |= fd.lhs
    cands = sorted(useful)
    bits = [1 << a for a in cands]
    for k in range(len(inst.targets) + 1):
        for combo in combinations(range(len(cands)), k):
            m = 0
            for c in combo:
                m |= bits[c]
            if _bounded_closure_mask(m, fds, rounds) & goal == goal:
                return frozenset(cands[c] for c in combo)
    raise AssertionError("the target set itself is always feasible")


def exact_rbsc(rb, limit: int = MAX_EXACT) -> tuple[tuple[int, ...], int]:
    """Cover every blue element while touching the fewest red elements.

    Ties go to fewer sets, then to the lexicographically first index tuple.
    """
    m = len(rb.sets)
    if m > limit:
        raise TooLarge(f"exact search refuses {m} sets > {limit}")
    index = {e: i for i, e in enumerate(sorted(rb.reds | rb.blues, key=repr))}
    red_mask = to_mask(index[e] for e in rb.reds)
    blue_goal = to_mask(index[e] for e in rb.blues)
    masks = [to_mask(index[e] for e in s) for s in rb.sets]
    union = 0
    for s in masks:
        union |= s
    if union & blue_goal != blue_goal:
        raise UncoverableError("some blue element lies in no set")
    best = None
    for k in range(m + 1):
        for combo in combinations(range(m), k):
            u = 0
            for c in combo:
                u |= masks[c]
            if u & blue_goal != blue_goal:
                continue
            cost = (u & red_mask).bit_count()
            if best is None or cost < best[1]:
                best = (combo, cost)
                if cost == 0:
                    return best
    return best
