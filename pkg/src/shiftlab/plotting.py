"""Figures for ``shiftlab report``; matplotlib runs on the Agg backend."""

from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def _log10(x: float) -> float:
    return math.log10(x) if x > 0 else float("nan")


def plot_coefficient_growth(series: dict[int, list], path: Path) -> Path:
    """``log10 |c_n|`` against n, one line per level."""
    fig, ax = plt.subplots(figsize=(6, 4))
    for level, coeffs in sorted(series.items()):
        ys = [_log10(abs(float(c))) if c else float("nan") for c in coeffs]
        ax.plot(range(len(ys)), ys, marker=".", label=f"level {level}")
    ax.set_xlabel("n")
    ax.set_ylabel("log10 |c_n|")
    ax.set_title("Coefficient growth at shift 1/2")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_residuals(labels: list[str], columns: dict[str, list[float]], path: Path,
                   threshold: float | None = None) -> Path:
    """``log10`` residuals per table row; exact zeros are drawn at -60."""
    fig, ax = plt.subplots(figsize=(max(6, 0.28 * len(labels)), 4))
    for (name, vals), marker in zip(columns.items(), "os^v"):
        ys = [_log10(v) if v else -60 for v in vals]
        ax.plot(range(len(labels)), ys, marker=marker, linestyle="none", label=name)
    if threshold is not None:
        ax.axhline(_log10(threshold), color="k", linestyle="--", linewidth=0.8, label="tolerance")
    ax.set_xticks(range(len(labels)))
    ax.set_xticklabels(labels, rotation=90, fontsize=7)
    ax.set_ylabel("log10 |difference|")
    ax.set_title("Residuals at shift 1/2")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_epstein_enclosures(radii: list[float], lowers: list[float], uppers: list[float],
                            reference: float, path: Path) -> Path:
    """Width of the certified enclosure and distance of its midpoint from a reference."""
    fig, ax = plt.subplots(figsize=(6, 4))
    widths = [u - l for l, u in zip(lowers, uppers)]
    mids = [abs((l + u) / 2 - reference) for l, u in zip(lowers, uppers)]
    ax.loglog(radii, widths, marker="o", label="enclosure width")
    ax.loglog(radii, mids, marker="s", label="|midpoint - reference|")
    ax.set_xlabel("radius R")
    ax.set_ylabel("error")
    ax.set_title("Direct lattice summation of S(1,0,1;2)")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
