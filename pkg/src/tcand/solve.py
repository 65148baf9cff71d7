"""Mode dispatch shared by the CLI and the benchmark runner."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .errors import InstanceError, NotSimpleError, TooLarge
from .fd import Instance, is_feasible
from .graph import is_simple, solve_simple
from .lp import build_layered_lp, solve_lp
from .oracle import MAX_EXACT, exact_tcand
from .redblue import rbsc_greedy, tcand_to_rbsc
from .rounding import round_deterministic, round_randomized_d

MODES = ("exact", "simple", "lp-det", "lp-rand", "rbsc-greedy")
RAND_RETRIES = 10


@dataclass
class Result:
    mode: str
    solution: frozenset[int]
    feasible: bool
    elapsed_ms: float
    lp_bound: float | None = None
    extra: dict = field(default_factory=dict)

    @property
    def size(self) -> int:
        return len(self.solution)


def applicable(inst: Instance, mode: str) -> bool:
    if mode == "exact":
        return inst.n <= MAX_EXACT
    if mode == "simple":
        return is_simple(inst.fds) and inst.rounds >= max(inst.n, 1)
    if mode == "rbsc-greedy":
        return inst.rounds == 1
    return True


def run_mode(inst: Instance, mode: str, seed: int = 0, c: float = 2.0, with_lp: bool = False) -> Result:
    """Solve ``inst`` with one mode and re-verify the answer."""
    if mode not in MODES:
        raise InstanceError(f"unknown mode {mode!r}")
    start = time.perf_counter()
    lp_bound = None
    extra: dict = {}
    if mode == "exact":
        if inst.n > MAX_EXACT:
            raise TooLarge(f"exact mode refuses n={inst.n} > {MAX_EXACT}")
        sol = exact_tcand(inst)
    elif mode == "simple":
        if not is_simple(inst.fds):
            raise NotSimpleError("simple mode needs single-attribute left sides")
        sol = solve_simple(inst)
    elif mode == "lp-det":
        lp = solve_lp(build_layered_lp(inst))
        lp_bound = lp.objective
        sol = round_deterministic(inst, lp)
    elif mode == "lp-rand":
        sol = frozenset()
        for attempt in range(RAND_RETRIES):
            sol = round_randomized_d(inst, seed + attempt, c)
            if is_feasible(sol, inst):
                break
        extra["attempts"] = attempt + 1
        extra["seed_used"] = seed + attempt
    else:
        if inst.rounds != 1:
            raise InstanceError("rbsc-greedy needs a 1-round instance")
        rb, mapping = tcand_to_rbsc(inst)
        cover, cost = rbsc_greedy(rb)
        sol = mapping.cover_to_attrs(rb, cover)
        extra["red_cost"] = cost
    elapsed = (time.perf_counter() - start) * 1000.0
    if with_lp and lp_bound is None:
        lp_bound = solve_lp(build_layered_lp(inst)).objective
    return Result(mode, sol, is_feasible(sol, inst), elapsed, lp_bound, extra)
