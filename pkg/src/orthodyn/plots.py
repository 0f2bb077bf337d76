"""Figure rendering for experiment reports.

Every function takes precomputed data plus an output path, writes one PNG,
and returns the path.  Rendering uses the Agg backend so the runner works
headless; the CSV and exit-code contracts never depend on these files.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = [
    "plot_correlations",
    "plot_f1_curve",
    "plot_atom_scan",
    "plot_block_magnitudes",
    "plot_dbar_curve",
    "plot_arcs",
    "plot_discrepancy",
    "plot_cross_table",
]

_DPI = 150


def _finish(fig, path) -> str:
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return str(path)


def plot_correlations(c: np.ndarray, H: int, raw: complex, path) -> str:
    """Correlation magnitudes over lags 1..H with the averaged square."""
    fig, ax = plt.subplots(figsize=(7, 4))
    h = np.arange(1, H + 1)
    ax.plot(h, np.abs(c[1 : H + 1]), lw=0.8, label="|c(h)|")
    ax.axhline(abs(raw), color="tab:red", ls="--", lw=1.0,
               label=f"|window mean| = {abs(raw):.3g}")
    ax.set_xlabel("lag h")
    ax.set_ylabel("correlation magnitude")
    ax.set_ylim(bottom=0.0)
    ax.legend(loc="best")
    return _finish(fig, path)


def plot_f1_curve(Hs, values, path) -> str:
    """Windowed Fourier sup average against window length, log2 x-axis."""
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(Hs, values, "o-", lw=1.2)
    ax.set_xscale("log", base=2)
    ax.set_xlabel("window length H")
    ax.set_ylabel("average window sup")
    ax.set_ylim(bottom=0.0)
    ax.grid(True, alpha=0.3)
    return _finish(fig, path)


def plot_atom_scan(positions, masses, atoms, tau: float, path) -> str:
    """Kernel mass over the frequency circle with located atoms marked."""
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.plot(positions, masses, lw=0.8)
    ax.axhline(tau, color="tab:gray", ls=":", lw=1.0, label=f"threshold {tau:g}")
    if atoms:
        ax.plot([a.position for a in atoms], [a.mass for a in atoms], "rv",
                ms=8, label=f"{len(atoms)} atom(s)")
    ax.set_xlabel("frequency position in [0, 1)")
    ax.set_ylabel("kernel mass")
    ax.legend(loc="best")
    return _finish(fig, path)


def plot_block_magnitudes(block_values, path) -> str:
    """Per-block magnitudes of the averaged block functional."""
    fig, ax = plt.subplots(figsize=(7, 4))
    k = np.arange(len(block_values))
    ax.bar(k, block_values, width=0.8)
    ax.set_xlabel("block index k")
    ax.set_ylabel("|block sum|")
    return _finish(fig, path)


def plot_dbar_curve(ks, costs, path) -> str:
    """Block transport distance against block length."""
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(ks, costs, "o-", lw=1.2)
    ax.set_xlabel("block length k")
    ax.set_ylabel("transport distance")
    ax.set_ylim(bottom=0.0)
    ax.grid(True, alpha=0.3)
    return _finish(fig, path)


def plot_arcs(arcs, certificates, path) -> str:
    """Final arc set as circle segments plus per-level certificate margins."""
    fig, (ax0, ax1) = plt.subplots(1, 2, figsize=(10, 4))
    for arc in arcs:
        s, l = float(arc.start), float(arc.length)
        if s + l <= 1.0:
            ax0.plot([s, s + l], [0, 0], lw=6, color="tab:blue",
                     solid_capstyle="butt")
        else:
            ax0.plot([s, 1.0], [0, 0], lw=6, color="tab:blue",
                     solid_capstyle="butt")
            ax0.plot([0.0, s + l - 1.0], [0, 0], lw=6, color="tab:blue",
                     solid_capstyle="butt")
    ax0.set_xlim(0, 1)
    ax0.set_yticks([])
    ax0.set_xlabel("circle position")
    ax0.set_title(f"{len(arcs)} arcs, max length {max(float(a.length) for a in arcs):.3g}")
    if certificates:
        levels = [c.level for c in certificates]
        ax1.semilogy(levels, [c.worst + c.slack for c in certificates], "o-",
                     label="worst + slack")
        ax1.semilogy(levels, [c.bound for c in certificates], "s--",
                     label="allowed bound")
        ax1.set_xlabel("level n")
        ax1.set_ylabel("uniform approximation error")
        ax1.legend(loc="best")
    return _finish(fig, path)


def plot_discrepancy(rows, path) -> str:
    """Empirical-vs-analytic moment discrepancy against the power n."""
    fig, ax = plt.subplots(figsize=(6, 4))
    ns = [r["n"] for r in rows]
    ds = [max(r["discrepancy"], 1e-18) for r in rows]
    ax.semilogy(ns, ds, lw=0.8)
    ax.set_xlabel("power n")
    ax.set_ylabel("moment discrepancy")
    ax.grid(True, alpha=0.3)
    return _finish(fig, path)


def plot_cross_table(labels, us2_values, f1_values, path) -> str:
    """Side-by-side seminorm and Fourier statistics for several sequences."""
    fig, ax = plt.subplots(figsize=(7, 4))
    x = np.arange(len(labels))
    ax.bar(x - 0.2, us2_values, width=0.4, label="degree-2 seminorm")
    ax.bar(x + 0.2, f1_values, width=0.4, label="window Fourier average")
    ax.set_xticks(x)
    ax.set_xticklabels(labels, rotation=20, ha="right", fontsize=8)
    ax.set_ylabel("statistic value")
    ax.legend(loc="best")
    return _finish(fig, path)
