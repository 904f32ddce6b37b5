"""Benchmark report figures, rendered to files next to the delimited report."""

from __future__ import annotations

from pathlib import Path
from typing import Union

from .planner import StatsTable


def render_stats_figures(table: StatsTable, out_dir: Union[str, Path]) -> list[Path]:
    """Write a success-rate bar chart and a median-actions chart as PNGs.

    Returns the written paths.  Import of the plotting backend is deferred
    so the rest of the package stays import-light.
    """
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []

    tiers = [str(r.tier) for r in table.rows]
    rates = [r.successes / r.runs if r.runs else 0.0 for r in table.rows]

    fig, ax = plt.subplots(figsize=(5, 3.2))
    ax.bar(tiers, rates, color="#31708f")
    ax.set_xlabel("Tier")
    ax.set_ylabel("Success rate")
    ax.set_ylim(0, 1.05)
    ax.spines["right"].set_visible(False)
    ax.spines["top"].set_visible(False)
    for x, rate in zip(tiers, rates):
        ax.annotate(f"{rate:.0%}", (x, rate), ha="center", va="bottom", fontsize=8)
    fig.tight_layout()
    path = out_dir / "success_rate_by_tier.png"
    fig.savefig(path, dpi=150)
    plt.close(fig)
    written.append(path)

    groups = [
        ("disentangling", [r.median_disentangling for r in table.rows]),
        ("recovery", [r.median_recovery for r in table.rows]),
        ("total", [r.median_total for r in table.rows]),
    ]
    width = 0.25
    fig, ax = plt.subplots(figsize=(5, 3.2))
    for i, (label, values) in enumerate(groups):
        xs = [j + (i - 1) * width for j in range(len(tiers))]
        ax.bar(xs, [v if v is not None else 0.0 for v in values], width, label=label)
    ax.set_xticks(range(len(tiers)))
    ax.set_xticklabels(tiers)
    ax.set_xlabel("Tier")
    ax.set_ylabel("Median actions (successful runs)")
    ax.spines["right"].set_visible(False)
    ax.spines["top"].set_visible(False)
    ax.legend(frameon=False, fontsize=8)
    fig.tight_layout()
    path = out_dir / "actions_by_tier.png"
    fig.savefig(path, dpi=150)
    plt.close(fig)
    written.append(path)

    return written
