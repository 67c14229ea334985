"""Figure rendering for the CLI report path.

Each table the CLI can emit has one matching plot, saved to a file next
to the delimited output.  matplotlib stays an import of this module only,
so non-plotting runs never pay for it.
"""

from __future__ import annotations

import math
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .experiments import FitResult, RefuteRow, SweepResult  # noqa: E402

_DPI = 150


def _save(fig, path: str):
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)


def plot_sweep(result: SweepResult, k: int, path: str):
    ns = [s.n for s in result.summaries]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(ns, [s.max_scaled_error for s in result.summaries], "o-", label="max")
    ax.plot(ns, [s.mean_scaled_error for s in result.summaries], "s--", label="mean")
    ax.axhline(0.5, color="gray", lw=0.8, label="worst-case 1/2")
    ax.set_xscale("log", base=2)
    ax.set_xlabel("N")
    ax.set_ylabel(f"error * N^{k}")
    ax.set_title(f"Scaled best-approximation error, k={k}")
    ax.legend()
    _save(fig, path)


def plot_fit(fit: FitResult, path: str):
    xs = [math.log(math.log(3 * n)) for n in fit.grid]
    ys = [math.log(y) for y in fit.maxima]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(xs, ys, "o", label="log max product-scaled error")
    ax.plot(xs, [fit.exponent * x + fit.intercept for x in xs], "-",
            label=f"fit: slope {fit.exponent:.3f}")
    ax.set_xlabel("log log 3N")
    ax.set_ylabel("log y")
    ax.set_title("Product-weighted error exponent fit")
    ax.legend()
    _save(fig, path)


def plot_refute(rows: Sequence[RefuteRow], path: str):
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot([r.n for r in rows], [float(r.measure) for r in rows], "o-",
            label="covering measure")
    ax.axhline(1.0, color="red", lw=0.8, label="refutation threshold")
    ax.set_xscale("log", base=2)
    ax.set_yscale("log")
    ax.set_xlabel("N")
    ax.set_ylabel("4C |Lambda| / N^k")
    ax.set_title("Covering measure of product-weighted intervals")
    ax.legend()
    _save(fig, path)


def plot_coprime_ratio(rows: Sequence[tuple], path: str):
    k = rows[0][1]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot([r[0] for r in rows], [r[3] for r in rows], "o-", label=f"k={k}")
    if k == 1:
        ax.axhline(0.5, color="gray", lw=0.8, label="limit 1/2")
    ax.set_xscale("log")
    ax.set_xlabel("x")
    ax.set_ylabel("sum / x^(2k)")
    ax.set_title("Pairwise-coprime weighted sum ratio")
    ax.legend()
    _save(fig, path)


def plot_census(rows: Sequence[tuple], path: str):
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot([r[0] for r in rows], [r[3] for r in rows], "o-")
    ax.set_xscale("log", base=2)
    ax.set_yscale("log")
    ax.set_xlabel("N")
    ax.set_ylabel("|Lambda_k(N)| / N^k")
    ax.set_title("Reachable-lcm census density")
    _save(fig, path)


def plot_kernel_check(rows: Sequence[dict], path: str):
    fig, ax = plt.subplots(figsize=(6, 4))
    deltas = sorted({r["delta"] for r in rows})
    for d in deltas:
        sub = [r for r in rows if r["delta"] == d]
        ax.plot([r["m"] for r in sub], [r["tail_value"] for r in sub], ".",
                label=f"delta={d}")
    ms = sorted({r["m"] for r in rows})
    ax.plot(ms, [6.0 / m for m in ms], "k-", lw=0.8, label="6/m")
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("m")
    ax.set_ylabel("tail sum")
    ax.set_title("Fourier tail sums vs. their per-case estimates")
    ax.legend(fontsize=8)
    _save(fig, path)
