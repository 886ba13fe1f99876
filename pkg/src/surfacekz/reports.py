"""Report writers: JSON lines, delimited tables, and figure rendering."""

from __future__ import annotations

import csv
import json
import time
from fractions import Fraction
from pathlib import Path

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np


def sanitize(obj):
    """Make a report JSON-serializable and deterministic."""
    if isinstance(obj, dict):
        return {str(k): sanitize(v) for k, v in sorted(obj.items(), key=lambda kv: str(kv[0]))}
    if isinstance(obj, (list, tuple)):
        return [sanitize(v) for v in obj]
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": float(obj.real), "im": float(obj.imag)}
    if isinstance(obj, np.ndarray):
        return sanitize(obj.tolist())
    if isinstance(obj, float) and obj != obj:  # NaN
        return "nan"
    return obj


def write_reports(path, reports, summary):
    """Append-only JSON lines: one object per sub-check plus a summary."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w") as f:
        for rep in reports:
            f.write(json.dumps(sanitize(rep), sort_keys=True) + "\n")
        f.write(json.dumps(sanitize(summary), sort_keys=True) + "\n")
    return path


def summarize(reports, config=None, timestamp=True):
    failures = [r.get("check", "?") for r in reports if not r.get("ok", False)]
    out = {
        "summary": True,
        "total": len(reports),
        "passed": len(reports) - len(failures),
        "failures": failures,
        "ok": not failures,
    }
    if config is not None:
        out["config"] = config
    if timestamp:
        out["timestamp"] = time.strftime("%Y-%m-%dT%H:%M:%S")
    return out


def write_dims_csv(path, table, g, n):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["g", "n", "p", "q", "dim"])
        for (p, q), dim in sorted(table.items()):
            writer.writerow([g, n, p, q, dim])
    return path


# -- figures -------------------------------------------------------------


def fig_dims_heatmap(table, g, n, path):
    pmax = max(p for p, _ in table)
    qmax = max(q for _, q in table)
    grid = np.full((qmax + 1, pmax + 1), np.nan)
    for (p, q), dim in table.items():
        grid[q, p] = dim
    fig, ax = plt.subplots(figsize=(4.2, 3.4))
    im = ax.imshow(grid, origin="lower", cmap="viridis")
    for (p, q), dim in table.items():
        ax.text(p, q, str(dim), ha="center", va="center", fontsize=8,
                color="white" if dim < np.nanmax(grid) * 0.6 else "black")
    ax.set_xlabel("p (x-degree)")
    ax.set_ylabel("q (y/t-degree)")
    ax.set_title("dim t_{%d,%d}[p,q]" % (g, n))
    fig.colorbar(im, ax=ax, shrink=0.85)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def fig_residuals(reports, path, title="check residuals vs budgets"):
    rows = [(r["check"], r["residual"], r["budget"]) for r in reports
            if "residual" in r and "budget" in r]
    if not rows:
        return None
    names = [r[0] for r in rows]
    resid = np.array([max(r[1], 1e-18) for r in rows])
    budget = np.array([max(r[2], 1e-18) for r in rows])
    y = np.arange(len(rows))
    fig, ax = plt.subplots(figsize=(7.2, 0.42 * len(rows) + 1.6))
    ax.barh(y + 0.18, resid, height=0.36, label="residual", color="#d95f02")
    ax.barh(y - 0.18, budget, height=0.36, label="budget", color="#7570b3")
    ax.set_xscale("log")
    ax.set_yticks(y)
    ax.set_yticklabels(names, fontsize=7)
    ax.set_xlabel("magnitude")
    ax.set_title(title)
    ax.legend(loc="lower right", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def fig_convergence(levels, residuals, path, xlabel="word-length cutoff L",
                    title="series truncation convergence"):
    fig, ax = plt.subplots(figsize=(4.6, 3.4))
    ax.semilogy(levels, [max(r, 1e-18) for r in residuals], "o-")
    ax.set_xlabel(xlabel)
    ax.set_ylabel("residual")
    ax.set_title(title)
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
