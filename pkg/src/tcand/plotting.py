"""Figures for benchmark reports, written straight to image files."""

from __future__ import annotations

import math
from collections import defaultdict
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

golden_mean = (math.sqrt(5) - 1.0) / 2.0
fig_width = 5.0

params = {
    "axes.labelsize": 10,
    "axes.titlesize": 10,
    "font.size": 9,
    "font.family": "sans-serif",
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "figure.figsize": [fig_width, fig_width * golden_mean],
    "figure.dpi": 150,
    "lines.markersize": 4,
    "lines.linewidth": 1.2,
    "axes.grid": True,
    "grid.alpha": 0.3,
}

MODE_COLORS = {
    "exact": "#08589e",
    "simple": "#4eb3d3",
    "lp-det": "#d95f02",
    "lp-rand": "#7570b3",
    "rbsc-greedy": "#1b9e77",
}


def _save(fig, path: Path) -> Path:
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path


def plot_ratios(rows, path: Path) -> Path:
    """Strip plot of solution size over the exact optimum, one column per mode."""
    by_mode = defaultdict(list)
    for r in rows:
        if r.get("ratio_vs_exact") is not None:
            by_mode[r["mode"]].append(r["ratio_vs_exact"])
    with plt.rc_context(params):
        fig, ax = plt.subplots()
        for k, (mode, vals) in enumerate(sorted(by_mode.items())):
            xs = [k + 0.08 * ((i % 5) - 2) for i in range(len(vals))]
            ax.plot(xs, vals, "o", alpha=0.6, color=MODE_COLORS.get(mode), label=mode)
        ax.axhline(1.0, color="k", lw=0.8, ls="--")
        ax.set_xticks(range(len(by_mode)))
        ax.set_xticklabels(sorted(by_mode))
        ax.set_ylabel("size / exact optimum")
        return _save(fig, path)


def plot_gap(rows, path: Path) -> Path:
    """Integral over fractional optimum against the round budget, with ``2^D``."""
    pts = {}
    for r in rows:
        if r.get("ip_lp_ratio") is not None:
            pts[(r["instance"], r["rounds"])] = r["ip_lp_ratio"]
    with plt.rc_context(params):
        fig, ax = plt.subplots()
        if pts:
            ds = sorted({d for _, d in pts})
            ax.semilogy([d for _, d in pts], list(pts.values()), "s", color="#d95f02", label="exact / LP")
            ax.semilogy(ds, [2.0**d for d in ds], "k--", label="$2^D$")
            ax.legend()
        ax.set_xlabel("rounds D")
        ax.set_ylabel("integrality ratio")
        return _save(fig, path)


def plot_timings(rows, path: Path) -> Path:
    by_mode = defaultdict(list)
    for r in rows:
        by_mode[r["mode"]].extend(r["times_ms"])
    with plt.rc_context(params):
        fig, ax = plt.subplots()
        modes = sorted(by_mode)
        if modes:
            ax.boxplot([by_mode[m] for m in modes])
            ax.set_xticks(range(1, len(modes) + 1))
            ax.set_xticklabels(modes)
            ax.set_yscale("log")
        ax.set_ylabel("time [ms]")
        return _save(fig, path)


def render_report(report: dict, out_dir) -> list[str]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rows = report["rows"]
    suite = report["suite"]
    paths = [
        plot_ratios(rows, out / f"{suite}_ratios.png"),
        plot_timings(rows, out / f"{suite}_timings.png"),
    ]
    if any(r.get("ip_lp_ratio") is not None for r in rows):
        paths.append(plot_gap(rows, out / f"{suite}_gap.png"))
    return [str(p) for p in paths]
