"""Artifact emission: atomic file writes, CSV/JSON, sidecars, PNG figures.

Every emitted file goes through an atomic temp-write-and-rename, and every
output gets a `<name>.meta.json` sidecar carrying the tool version and a
hash of the configuration that produced it, so reruns are byte-checkable.
Figures are rendered headless (Agg) next to the delimited output and can
be suppressed wholesale with plots=False at the call sites.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import os
from fractions import Fraction

import dimlab
from dimlab.dimension import profile_rows, render_decimal


def atomic_write_bytes(path, data: bytes) -> None:
    path = os.fspath(path)
    tmp = path + ".tmp"
    with open(tmp, "wb") as fh:
        fh.write(data)
    os.replace(tmp, path)


def atomic_write_text(path, text: str) -> None:
    atomic_write_bytes(path, text.encode("utf-8"))


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def config_hash(obj) -> str:
    return hashlib.sha256(canonical_json(obj).encode("utf-8")).hexdigest()


def write_json(path, obj) -> None:
    atomic_write_text(path, json.dumps(obj, indent=2, sort_keys=True) + "\n")


def write_sidecar(path, config_obj) -> None:
    """Provenance sidecar: tool version, config hash, and the config echo."""
    meta = {
        "tool": "dimlab",
        "version": dimlab.__version__,
        "config_hash": config_hash(config_obj),
        "config": config_obj,
    }
    write_json(os.fspath(path) + ".meta.json", meta)


def write_csv(path, fieldnames, rows) -> None:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=fieldnames, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    atomic_write_text(path, buf.getvalue())


def write_profile_csv(path, prof) -> None:
    """Profile CSV: n, c, ratio (6 places), exact fraction columns."""
    write_csv(path, ["n", "c", "ratio", "ratio_num", "ratio_den"],
              profile_rows(prof))


def write_trace_csv(path, trace, per_bit: bool = False) -> None:
    """Reduction/decode trace CSV: n, usage (, per_bit_queries)."""
    n = len(trace.usage) - 1
    if per_bit:
        rows = [{"n": m, "usage": trace.usage[m],
                 "per_bit_queries": trace.per_bit_queries[m]}
                for m in range(1, n + 1)]
        write_csv(path, ["n", "usage", "per_bit_queries"], rows)
    else:
        rows = [{"n": m, "usage": trace.usage[m]} for m in range(1, n + 1)]
        write_csv(path, ["n", "usage"], rows)


# ---------------------------------------------------------------------------
# Figures


def _plt():
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    return plt


_SAVEFIG = {"dpi": 150, "metadata": {"Software": "dimlab"}}


def plot_profile(path, prof, title: str, hlines=()) -> None:
    """Ratio-vs-n curve on a log x axis with the tail region marked."""
    plt = _plt()
    fig, ax = plt.subplots(figsize=(7, 4.2))
    xs = [s.n for s in prof.samples]
    ys = [float(s.value) for s in prof.samples]
    ax.plot(xs, ys, marker="o", markersize=3, linewidth=1.2)
    ax.axvline(prof.tail_start, color="gray", linestyle=":", linewidth=1,
               label=f"tail from n={prof.tail_start}")
    for label, y in hlines:
        ax.axhline(float(y), linestyle="--", linewidth=1, alpha=0.7,
                   label=f"{label}={render_decimal(Fraction(y), 3)}")
    ax.set_xscale("log")
    ax.set_xlabel("prefix length n")
    ax.set_ylabel("ratio")
    ax.set_title(title)
    ax.grid(True, alpha=0.3)
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, **_SAVEFIG)
    plt.close(fig)


def plot_trace(path, trace, title: str) -> None:
    """usage(n)/n over n, log x axis."""
    plt = _plt()
    fig, ax = plt.subplots(figsize=(7, 4.2))
    n = len(trace.usage) - 1
    step = max(1, n // 4000)
    xs = list(range(1, n + 1, step))
    ys = [trace.usage[m] / m for m in xs]
    ax.plot(xs, ys, linewidth=1.0)
    ax.set_xscale("log")
    ax.set_xlabel("output length n")
    ax.set_ylabel("usage(n)/n")
    ax.set_title(title)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, **_SAVEFIG)
    plt.close(fig)


def plot_extract(path, source_profile, result_profile, targets: dict,
                 title: str) -> None:
    """Source vs extracted-sequence profiles with the target floors."""
    plt = _plt()
    fig, ax = plt.subplots(figsize=(7, 4.2))
    for prof, label in ((source_profile, "source"), (result_profile, "extracted")):
        xs = [s.n for s in prof.samples]
        ys = [float(s.value) for s in prof.samples]
        ax.plot(xs, ys, marker="o", markersize=3, linewidth=1.2, label=label)
    for label, y in targets.items():
        ax.axhline(float(y), linestyle="--", linewidth=1, alpha=0.7,
                   label=f"{label}={render_decimal(Fraction(y), 3)}")
    ax.set_xscale("log")
    ax.set_xlabel("prefix length n")
    ax.set_ylabel("C(prefix)/n")
    ax.set_title(title)
    ax.grid(True, alpha=0.3)
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, **_SAVEFIG)
    plt.close(fig)


def plot_summary(path, rows, title: str = "experiment summary") -> None:
    """Grouped bars of source vs extracted dimension estimates per config."""
    plt = _plt()
    fig, ax = plt.subplots(figsize=(8, 4.5))
    names = [r["name"] for r in rows]
    idx = range(len(rows))
    width = 0.2

    def col(key):
        return [float(Fraction(r[key])) if r[key] not in ("", None) else 0.0
                for r in rows]

    ax.bar([i - 1.5 * width for i in idx], col("dim_hat_H_S"), width,
           label="dim_hat_H(S)")
    ax.bar([i - 0.5 * width for i in idx], col("dim_hat_P_S"), width,
           label="dim_hat_P(S)")
    ax.bar([i + 0.5 * width for i in idx], col("dim_hat_H_R"), width,
           label="dim_hat_H(extracted)")
    ax.bar([i + 1.5 * width for i in idx], col("dim_hat_P_R"), width,
           label="dim_hat_P(extracted)")
    ax.set_xticks(list(idx))
    ax.set_xticklabels(names, rotation=15, ha="right", fontsize=8)
    ax.set_ylabel("estimate")
    ax.set_title(title)
    ax.grid(True, axis="y", alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, **_SAVEFIG)
    plt.close(fig)
