"""Evaluation report rendering: text table, TSV, and figures.

The evaluate command funnels its MetricRow collections through here.  The
text table is for terminals, the TSV for downstream tooling, and the PNGs
summarize the same numbers visually.  All writers are pure functions of
their inputs so reports are reproducible.
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .evalkit import MetricRow

_HEADERS = {
    "set_recall": "Recall",
    "ndcg10": "nDCG@10",
    "ndcg20": "nDCG@20",
    "p10": "P@10",
    "p20": "P@20",
    "bpref": "bpref",
    "unjudged20": "Unj@20",
}


def format_table(rows: Sequence[MetricRow], title: str = "") -> str:
    """Fixed-width table, one row per MetricRow."""
    names = MetricRow.metric_names()
    header_cells = ["run"] + [_HEADERS[name] for name in names]
    body = [[row.label] + [f"{getattr(row, name):.4f}" for name in names] for row in rows]
    widths = [max(len(header_cells[i]), *(len(line[i]) for line in body))
              for i in range(len(header_cells))]
    lines = []
    if title:
        lines.append(title)
    lines.append("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(header_cells)))
    lines.append("  ".join("-" * widths[i] for i in range(len(widths))))
    for line in body:
        lines.append("  ".join(line[i].ljust(widths[i]) for i in range(len(line))))
    return "\n".join(lines)


def write_tsv(rows: Sequence[MetricRow], path: str | Path) -> None:
    names = MetricRow.metric_names()
    with open(path, "w", encoding="utf-8") as handle:
        handle.write("\t".join(["run"] + [_HEADERS[name] for name in names]) + "\n")
        for row in rows:
            cells = [row.label] + [f"{getattr(row, name):.6f}" for name in names]
            handle.write("\t".join(cells) + "\n")


def write_metric_figure(rows: Sequence[MetricRow], path: str | Path) -> None:
    """Grouped bars: one cluster per metric, one bar per run."""
    bounded = [name for name in MetricRow.metric_names() if name != "unjudged20"]
    fig, (ax_metrics, ax_unjudged) = plt.subplots(
        1, 2, figsize=(11, 4.5), gridspec_kw={"width_ratios": [4, 1]})

    cluster_width = 0.8
    bar_width = cluster_width / max(len(rows), 1)
    for run_index, row in enumerate(rows):
        offsets = [i - cluster_width / 2 + (run_index + 0.5) * bar_width
                   for i in range(len(bounded))]
        ax_metrics.bar(offsets, [getattr(row, name) for name in bounded],
                       width=bar_width, label=row.label)
    ax_metrics.set_xticks(range(len(bounded)))
    ax_metrics.set_xticklabels([_HEADERS[name] for name in bounded])
    ax_metrics.set_ylim(0.0, 1.05)
    ax_metrics.set_ylabel("score")
    ax_metrics.set_title("Ranking quality by run")
    ax_metrics.legend(fontsize="small")

    ax_unjudged.bar([row.label for row in rows],
                    [row.unjudged20 for row in rows], color="tab:gray")
    ax_unjudged.set_ylabel("documents")
    ax_unjudged.set_title("Unjudged in top 20")
    ax_unjudged.tick_params(axis="x", rotation=30)

    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def write_overlap_figure(matrix: Sequence[Sequence[float]], labels: Sequence[str],
                         k: int, path: str | Path) -> None:
    """Heatmap of pairwise top-k result overlap between runs."""
    fig, ax = plt.subplots(figsize=(1.6 * len(labels) + 2.5, 1.2 * len(labels) + 2.0))
    image = ax.imshow(matrix, vmin=0.0, vmax=1.0, cmap="viridis")
    ax.set_xticks(range(len(labels)))
    ax.set_xticklabels(labels, rotation=30, ha="right")
    ax.set_yticks(range(len(labels)))
    ax.set_yticklabels(labels)
    for i in range(len(labels)):
        for j in range(len(labels)):
            value = matrix[i][j]
            ax.text(j, i, f"{value:.2f}", ha="center", va="center",
                    color="white" if value < 0.6 else "black", fontsize=9)
    ax.set_title(f"Top-{k} result overlap (Jaccard)")
    fig.colorbar(image, ax=ax, shrink=0.85)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
