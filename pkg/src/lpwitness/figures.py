"""Static report figures rendered next to the delimited outputs."""

from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


def _series(points, key):
    xs, ys = [], []
    for p in points:
        v = p.get(key)
        if v is not None and not (isinstance(v, float) and math.isnan(v)):
            xs.append(p["sweep_param"])
            ys.append(v)
    return xs, ys


def render_summary_figures(points, outdir, channel_kind: str) -> list:
    """Render the word-error-rate curves (and the per-check event failure
    curve when present) as PNG files.  Returns the written paths."""
    out = Path(outdir)
    written = []

    fig, ax = plt.subplots(figsize=(6.4, 4.4))
    plotted = False
    for key, label, style in (("wer_lp", "LP decoding WER", "o-"),
                              ("wer_msa", "min-sum WER", "s-"),
                              ("bound_pw", "union bound on WER", "--")):
        xs, ys = _series(points, key)
        if xs:
            ax.plot(xs, ys, style, label=label)
            plotted = True
    xs, ys = _series(points, "witness_rate")
    if xs:
        ax.plot(xs, [1.0 - y for y in ys], "^-", label="uncertified fraction")
        plotted = True
    thr = next((p.get("threshold_param") for p in points
                if p.get("threshold_param") is not None), None)
    if thr is not None:
        ax.axvline(thr, color="gray", linestyle=":",
                   label="Bhattacharyya threshold")
    if plotted:
        ax.set_yscale("log")
        ax.set_xlabel(f"{channel_kind} channel parameter")
        ax.set_ylabel("rate")
        ax.grid(True, which="both", alpha=0.3)
        ax.legend(fontsize=8)
        fig.tight_layout()
        path = out / "wer_curves.png"
        fig.savefig(path, dpi=150)
        written.append(path)
    plt.close(fig)

    xs, ys = _series(points, "mean_aj_failure_fraction")
    if xs:
        fig, ax = plt.subplots(figsize=(6.4, 4.4))
        ax.plot(xs, ys, "o-", label="mean per-check event failure")
        bx, by = _series(points, "bound_paj")
        if bx:
            ax.plot(bx, by, "--", label="per-check union bound")
        ax.set_yscale("log")
        ax.set_xlabel(f"{channel_kind} channel parameter")
        ax.set_ylabel("fraction of checks")
        ax.grid(True, which="both", alpha=0.3)
        ax.legend(fontsize=8)
        fig.tight_layout()
        path = out / "event_failures.png"
        fig.savefig(path, dpi=150)
        written.append(path)
        plt.close(fig)
    return written
