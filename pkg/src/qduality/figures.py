"""Figure rendering for sweep reports.

Renders the delimited sweep output into summary figures written next to the
CSV: a slack histogram per measure pair and a wave-particle content scatter
against purity. Import stays local to the report path so library use never
pulls in a plotting backend.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

__all__ = ["render_sweep_figures"]

_PAIR_COLORS = {"vn": "tab:blue", "l1": "tab:orange", "wy": "tab:green", "hs": "tab:red"}


def _by_pair(rows):
    grouped = {}
    for row in rows:
        grouped.setdefault(row["pair_name"], []).append(row)
    return grouped


def render_sweep_figures(rows, out_dir, prefix: str = "sweep") -> list:
    """Write slack histograms and a P+C vs purity scatter; returns the file paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    grouped = _by_pair(rows)
    paths = []

    fig, axes = plt.subplots(2, 2, figsize=(9, 7), constrained_layout=True)
    for ax, (name, group) in zip(axes.ravel(), sorted(grouped.items())):
        slacks = [r["slack"] for r in group]
        ax.hist(slacks, bins=60, color=_PAIR_COLORS.get(name, "gray"))
        ax.set_title(f"pair {name}  (n={len(group)})")
        ax.set_xlabel("slack = alpha - P - C" + (" - E" if group[0]["E"] is not None else ""))
        ax.set_ylabel("count")
    for ax in axes.ravel()[len(grouped):]:
        ax.set_visible(False)
    path = out_dir / f"{prefix}_slack_hist.png"
    fig.savefig(path, dpi=150)
    plt.close(fig)
    paths.append(path)

    fig, ax = plt.subplots(figsize=(7, 5), constrained_layout=True)
    for name, group in sorted(grouped.items()):
        purity = [r["purity"] for r in group]
        content = [(r["P"] + r["C"]) / r["alpha"] for r in group]
        ax.scatter(purity, content, s=6, alpha=0.4, label=f"pair {name}",
                   color=_PAIR_COLORS.get(name, "gray"))
    ax.axhline(1.0, color="black", lw=0.8, ls="--")
    ax.set_xlabel("purity of the state")
    ax.set_ylabel("(P + C) / alpha")
    ax.legend(loc="best", fontsize=9)
    path = out_dir / f"{prefix}_content_vs_purity.png"
    fig.savefig(path, dpi=150)
    plt.close(fig)
    paths.append(path)

    return paths
