"""Rendering of synthesis reports: text table, delimited file, figures.

The text table mirrors the layout used when reporting a synthesis: one
column per variable, rows for the adjusted class means, the assessment
itself, the adjusted variance diagonal, and the resolved / maximum
resolvable uncertainty percentages. Figures show, per variable, every
model output against the prior and adjusted two-standard-deviation bands
(bands on count variables are clipped at zero), plus a resolved-uncertainty
bar chart.
"""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt


def _rows(report_doc: dict) -> list[tuple[str, list[float]]]:
    rows = []
    for label, values in zip(report_doc["class_labels"], report_doc["adjusted_class_means"]):
        rows.append((f"adjusted mean [{label}]", values))
    rows.append(("assessment", report_doc["pba"]))
    rows.append(("adjusted variance", report_doc["adjusted_var_diag"]))
    rows.append(("prior variance", report_doc["prior_var_diag"]))
    rows.append(("discrepancy variance", report_doc["weights"]["var_u_diag"]))
    rows.append(("resolved %", report_doc["resolved_pct"]))
    rows.append(("max resolvable %", report_doc["max_resolvable_pct"]))
    return rows


def report_table_text(report_doc: dict) -> str:
    """Fixed-width table, values rounded to 2 decimals for display."""
    names = report_doc["variables"]["names"]
    rows = _rows(report_doc)
    label_w = max(len(r[0]) for r in rows)
    col_w = max(12, max(len(n) for n in names) + 2)
    header = " " * label_w + "".join(f"{n:>{col_w}}" for n in names)
    lines = [header]
    for label, values in rows:
        lines.append(f"{label:<{label_w}}" + "".join(f"{v:>{col_w}.2f}" for v in values))
    return "\n".join(lines)


def write_delimited(report_doc: dict, path: str | Path) -> Path:
    """Full-precision CSV of the table rows (one column per variable)."""
    path = Path(path)
    names = report_doc["variables"]["names"]
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["row", *names])
        for label, values in _rows(report_doc):
            writer.writerow([label, *[repr(float(v)) for v in values]])
    return path


def render_figures(report_doc: dict, outdir: str | Path) -> list[Path]:
    """Write the uncertainty-band and resolution figures; returns the paths."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    names = report_doc["variables"]["names"]
    integral = report_doc["variables"].get("integral") or [False] * len(names)
    q = len(names)
    x = np.arange(q)

    prior_mean = np.array(report_doc["prior_prevision"], dtype=float)
    prior_sd = np.sqrt(np.array(report_doc["prior_var_diag"], dtype=float))
    adj_mean = np.array(report_doc["pba"], dtype=float)
    adj_sd = np.sqrt(np.array(report_doc["adjusted_var_diag"], dtype=float))

    def clip(lower: np.ndarray) -> np.ndarray:
        return np.where(integral, np.maximum(lower, 0.0), lower)

    paths = []
    fig, ax = plt.subplots(figsize=(10, 5.5))
    ax.errorbar(
        x - 0.12, prior_mean, yerr=[prior_mean - clip(prior_mean - 2 * prior_sd), 2 * prior_sd],
        fmt="o", color="tab:gray", capsize=4, label="prior ±2sd",
    )
    ax.errorbar(
        x + 0.12, adj_mean, yerr=[adj_mean - clip(adj_mean - 2 * adj_sd), 2 * adj_sd],
        fmt="o", color="tab:blue", capsize=4, label="adjusted ±2sd",
    )
    markers = ["s", "^", "v", "D", "P", "X"]
    for i, (label, items) in enumerate(report_doc["model_outputs"].items()):
        for out in items:
            ax.scatter(
                x, out["values"], marker=markers[i % len(markers)], s=28,
                alpha=0.8, label=f"{out['model_id']} [{label}]",
            )
    ax.set_xticks(x, names, rotation=30, ha="right")
    ax.set_ylabel("value")
    ax.set_title("Model outputs against prior and adjusted beliefs")
    ax.legend(fontsize=8, ncols=2)
    fig.tight_layout()
    band_path = outdir / "uncertainty_bands.png"
    fig.savefig(band_path, dpi=140)
    plt.close(fig)
    paths.append(band_path)

    fig, ax = plt.subplots(figsize=(10, 4))
    ru = np.array(report_doc["resolved_pct"], dtype=float)
    mru = np.array(report_doc["max_resolvable_pct"], dtype=float)
    ax.bar(x - 0.18, ru, width=0.36, label="resolved %", color="tab:blue")
    ax.bar(x + 0.18, mru, width=0.36, label="max resolvable %", color="tab:orange", alpha=0.7)
    ax.set_xticks(x, names, rotation=30, ha="right")
    ax.set_ylim(0, 100)
    ax.set_ylabel("% of prior variance")
    ax.set_title("Uncertainty resolved by the synthesis")
    ax.legend()
    fig.tight_layout()
    res_path = outdir / "resolution.png"
    fig.savefig(res_path, dpi=140)
    plt.close(fig)
    paths.append(res_path)
    return paths
