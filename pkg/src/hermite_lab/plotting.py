"""Static SVG plots of result tables (needs the ``plot`` extra, i.e. matplotlib).

Output is byte-stable for identical input: the SVG id salt is fixed and no
creation date is written.
"""
from __future__ import annotations

import warnings
from pathlib import Path

import numpy as np

from .csvio import read_results

__all__ = ["plot", "PLOT_KINDS"]

PLOT_KINDS = ("loglog_fit", "heatmap")


def _float(s):
    if s is None or s == "":
        return None
    try:
        v = float(s)
    except ValueError:
        return None
    return v if np.isfinite(v) else None


def _setup():
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    matplotlib.rcParams.update({"svg.hashsalt": "hermite-lab", "svg.fonttype": "path",
                                "path.simplify": False})
    return plt


def _save(fig, path):
    fig.savefig(path, format="svg", metadata={"Date": None, "Creator": None})


def _require(header, cols):
    missing = [c for c in cols if c not in header]
    if missing:
        raise ValueError(f"schema mismatch: missing columns {missing}")


def _loglog(rows, header, out, x, y, group):
    from .bench.fitting import loglog_fit
    plt = _setup()
    fig, ax = plt.subplots(figsize=(6, 4.5))
    buckets: dict = {}
    skipped = 0
    for r in rows:
        xv, yv = _float(r.get(x)), _float(r.get(y))
        if xv is None or yv is None or xv <= 0 or yv <= 0:
            skipped += 1
            continue
        buckets.setdefault(tuple(r.get(g, "") for g in group), []).append((xv, yv))
    if skipped:
        warnings.warn(f"{skipped} rows without positive {x}/{y} values were skipped")
    for key, pts in buckets.items():
        pts.sort()
        xs = np.array([p[0] for p in pts])
        ys = np.array([p[1] for p in pts])
        label = " ".join(f"{g}={v}" for g, v in zip(group, key)) or y
        line = ax.loglog(xs, ys, "o", label=label)[0]
        if xs.size >= 2 and np.unique(xs).size >= 2:
            fit = loglog_fit(xs, ys)
            xx = np.array([xs.min(), xs.max()])
            ax.loglog(xx, fit.predict(xx), "-", color=line.get_color())
            ax.annotate(f"slope {fit.slope:.3f}", (xs[-1], ys[-1]), textcoords="offset points",
                        xytext=(4, 4), fontsize=8, color=line.get_color())
    if not buckets:
        warnings.warn("no plottable rows")
    ax.set_xlabel(x)
    ax.set_ylabel(y)
    if buckets:
        ax.legend(fontsize=7)
    fig.tight_layout()
    _save(fig, out)
    plt.close(fig)


def _heatmap(rows, header, out, y):
    plt = _setup()
    pts = []
    skipped = 0
    for r in rows:
        N, m, v = _float(r.get("N")), _float(r.get("m")), _float(r.get(y))
        if N is None or m is None or v is None or N <= 0 or m <= 0:
            skipped += 1
            continue
        pts.append((np.log2(N), np.log2(m), v))
    if skipped:
        warnings.warn(f"{skipped} rows without positive N, m or {y} were skipped")
    fig, ax = plt.subplots(figsize=(6, 4.5))
    if pts:
        P = np.array(sorted(pts))
        xs, ys = np.unique(P[:, 0]), np.unique(P[:, 1])
        Z = np.full((ys.size, xs.size), np.nan)
        for a, b, v in P:
            Z[np.searchsorted(ys, b), np.searchsorted(xs, a)] = v
        ext = [xs.min() - 0.5, xs.max() + 0.5, ys.min() - 0.5, ys.max() + 0.5]
        im = ax.imshow(Z, origin="lower", aspect="auto", extent=ext, cmap="viridis", interpolation="nearest")
        fig.colorbar(im, ax=ax, label=y)
        lx = np.linspace(ext[0], ext[1], 2)
        ax.plot(lx, lx / 2, "w--", label="m^2 = N")
        ax.plot(lx, 1.5 * lx, "w:", label="m^2 = N^3")
        ax.set_xlim(ext[0], ext[1])
        ax.set_ylim(ext[2], ext[3])
        ax.legend(fontsize=7, loc="upper left")
    else:
        warnings.warn("no plottable rows")
    ax.set_xlabel("log2 N")
    ax.set_ylabel("log2 m")
    fig.tight_layout()
    _save(fig, out)
    plt.close(fig)


def plot(results_csv, kind: str = "loglog_fit", out=None, x: str = "N", y: str | None = None,
         group=()) -> Path:
    """Render ``results_csv`` as an SVG next to it (or at ``out``)."""
    if kind not in PLOT_KINDS:
        raise ValueError(f"kind must be one of {PLOT_KINDS}")
    header, rows = read_results(results_csv)
    if y is None:
        y = "value" if "value" in header else "ratio"
    if kind == "loglog_fit":
        _require(header, [x, y, *group])
    else:
        _require(header, ["N", "m", y])
    out = Path(out) if out is not None else Path(results_csv).with_name(f"{kind}.svg")
    if kind == "loglog_fit":
        _loglog(rows, header, out, x, y, tuple(group))
    else:
        _heatmap(rows, header, out, y)
    return out
