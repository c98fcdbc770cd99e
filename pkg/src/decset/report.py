"""Per-class learning statistics as CSV, with matplotlib figures."""

from __future__ import annotations

import csv
import os
from collections import Counter
from typing import List

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

STATS_FIELDS = [
    "class", "positives", "negatives", "terms", "truncated",
    "cover_cost", "rules", "literals", "enum_seconds", "cover_seconds",
]


def stats_rows(report, model) -> List[dict]:
    rows = []
    for c in report.classes:
        rules = [r for r in model.rules if r.cls == c.cls]
        rows.append({
            "class": c.name,
            "positives": c.positives,
            "negatives": c.negatives,
            "terms": c.terms,
            "truncated": int(c.truncated),
            "cover_cost": c.cover_cost,
            "rules": len(rules),
            "literals": sum(r.term.size for r in rules),
            "enum_seconds": f"{c.enum_seconds:.4f}",
            "cover_seconds": f"{c.cover_seconds:.4f}",
        })
    return rows


def write_stats_csv(rows: List[dict], fh) -> None:
    w = csv.DictWriter(fh, fieldnames=STATS_FIELDS, lineterminator="\n")
    w.writeheader()
    w.writerows(rows)


def plot_term_sizes(report, path: str) -> None:
    """Histogram of enumerated term sizes, one bar group per class."""
    fig, ax = plt.subplots(figsize=(6, 3.5))
    sizes = sorted({s for c in report.classes for s in c.term_sizes}) or [0]
    width = 0.8 / max(len(report.classes), 1)
    for k, c in enumerate(report.classes):
        cnt = Counter(c.term_sizes)
        xs = [s + (k - (len(report.classes) - 1) / 2) * width for s in sizes]
        ax.bar(xs, [cnt.get(s, 0) for s in sizes], width=width, label=c.name)
    ax.set_xticks(sizes)
    ax.set_xlabel("term size (literals)")
    ax.set_ylabel("terms enumerated")
    ax.set_title(f"objective={report.objective}, symmetry breaking={'on' if report.symmetry_breaking else 'off'}")
    ax.legend(title="class", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_phase_times(report, path: str) -> None:
    fig, ax = plt.subplots(figsize=(6, 3.5))
    names = [c.name for c in report.classes]
    enum = [c.enum_seconds for c in report.classes]
    cover = [c.cover_seconds for c in report.classes]
    ax.bar(names, enum, label="enumeration")
    ax.bar(names, cover, bottom=enum, label="set cover")
    ax.set_ylabel("wall time (s)")
    ax.set_xlabel("class")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def write_report(report, model, outdir: str) -> List[str]:
    """Write ``stats.csv``, ``term_sizes.png`` and ``phase_times.png``."""
    os.makedirs(outdir, exist_ok=True)
    paths = [os.path.join(outdir, n) for n in ("stats.csv", "term_sizes.png", "phase_times.png")]
    with open(paths[0], "w", newline="") as fh:
        write_stats_csv(stats_rows(report, model), fh)
    plot_term_sizes(report, paths[1])
    plot_phase_times(report, paths[2])
    return paths
