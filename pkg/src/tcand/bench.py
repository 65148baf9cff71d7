"""Benchmark suites: run every applicable mode on a fixed family of
instances and tabulate sizes, timings and approximation ratios."""

from __future__ import annotations

import csv
import itertools
from typing import Iterator

from .errors import TcandError
from .fd import Instance
from .generators import gen_gap_instance, gen_random_instance, gen_vc_instance
from .lp import lp_lower_bound
from .oracle import MAX_EXACT, exact_tcand
from .solve import MODES, applicable, run_mode

SCHEMA_VERSION = 1
SUITES = ("gap", "random-small", "vc", "simple")

CSV_FIELDS = (
    "instance", "n", "rounds", "mode", "size", "feasible", "lp_bound", "exact",
    "ratio_vs_lp", "ratio_vs_exact", "ip_lp_ratio", "median_ms",
)


def _vc_graphs() -> Iterator[tuple[str, list]]:
    yield "triangle", [(0, 1), (1, 2), (0, 2)]
    yield "path5", [(i, i + 1) for i in range(4)]
    yield "cycle6", [(i, (i + 1) % 6) for i in range(6)]
    yield "star5", [(0, i) for i in range(1, 6)]
    yield "k4", list(itertools.combinations(range(4), 2))
    yield "k5", list(itertools.combinations(range(5), 2))
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    yield "petersen", outer + spokes + inner


def suite_instances(suite: str, seed: int = 0) -> list[tuple[str, Instance]]:
    if suite == "gap":
        return [(f"gap_g{g}_D{d}", gen_gap_instance(g, d)) for g in (5, 6) for d in (1, 2, 3)]
    if suite == "random-small":
        out = []
        for k in range(30):
            s = seed * 1000 + k
            n = 6 + k % 7
            inst = gen_random_instance(n, 2 * n, max_lhs=3, seed=s, rounds=1 + k % 3)
            out.append((f"rand_{s}", inst))
        return out
    if suite == "vc":
        return [(f"vc_{name}", gen_vc_instance(edges)) for name, edges in _vc_graphs()]
    if suite == "simple":
        return [
            (f"simple_{seed * 1000 + k}",
             gen_random_instance(6 + k % 7, 8 + k % 9, max_lhs=1, seed=seed * 1000 + k))
            for k in range(20)
        ]
    raise TcandError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")


def _ratio(a, b):
    if a is None or b is None:
        return None
    if b == 0:
        return 1.0 if a == 0 else None
    return a / b


def run_bench(suite: str, repeat: int = 1, seed: int = 0, c: float = 2.0) -> dict:
    """Run the suite and return a JSON-ready report."""
    if repeat < 1:
        raise TcandError("repeat must be at least 1")
    rows = []
    for name, inst in suite_instances(suite, seed):
        lp = lp_lower_bound(inst)
        exact = len(exact_tcand(inst)) if inst.n <= MAX_EXACT else None
        for mode in MODES:
            if not applicable(inst, mode):
                continue
            samples = [run_mode(inst, mode, seed=seed, c=c) for _ in range(repeat)]
            first = samples[0]
            times = [r.elapsed_ms for r in samples]
            rows.append({
                "instance": name,
                "n": inst.n,
                "rounds": inst.rounds,
                "mode": mode,
                "solution": inst.label(first.solution),
                "size": first.size,
                "feasible": all(r.feasible for r in samples),
                "lp_bound": lp,
                "exact": exact,
                "ratio_vs_lp": _ratio(first.size, lp),
                "ratio_vs_exact": _ratio(first.size, exact),
                "ip_lp_ratio": _ratio(exact, lp),
                "times_ms": times,
                "median_ms": sorted(times)[len(times) // 2],
            })
    return {
        "schema_version": SCHEMA_VERSION,
        "suite": suite,
        "repeat": repeat,
        "seed": seed,
        "c": c,
        "rows": rows,
    }


def write_csv(report: dict, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=CSV_FIELDS, extrasaction="ignore")
        w.writeheader()
        for row in report["rows"]:
            w.writerow({k: ("" if row[k] is None else row[k]) for k in CSV_FIELDS})


def format_table(report: dict) -> str:
    header = f"{'instance':<18} {'mode':<12} {'size':>4} {'exact':>5} {'lp':>8} {'feas':>5} {'ms':>9}"
    lines = [header, "-" * len(header)]
    for r in report["rows"]:
        exact = "-" if r["exact"] is None else str(r["exact"])
        lines.append(
            f"{r['instance']:<18} {r['mode']:<12} {r['size']:>4} {exact:>5} "
            f"{r['lp_bound']:>8.4f} {str(r['feasible']):>5} {r['median_ms']:>9.2f}"
        )
    return "\n".join(lines)
