"""CSV readers and writers for result tables and fields.

Result tables are UTF-8, comma separated, with a header row; floats are
written to 6 significant digits. Field files keep full precision and start
with ``#`` comment lines naming the grid parameters.
"""
from __future__ import annotations

import csv
import io
import math
from pathlib import Path

import numpy as np

from .fields import SampledField, SpectralField
from .fourier import SectorCover

__all__ = [
    "format_value",
    "results_text",
    "write_results",
    "read_results",
    "write_spectral_field",
    "read_spectral_field",
    "write_sampled_field",
    "read_sampled_field",
    "write_sector_cover",
    "SCHEMAS",
]

#: column sets of the tables produced by the experiment runner
SCHEMAS = {
    "phase_sweep": ("N", "x0_norm", "sample_sup_E", "sample_sup_dE", "residual_max"),
    "knapp": ("kind", "d", "N", "m", "p", "ratio", "fitted_slope", "required_exponent"),
    "sector_cover": ("index", "r", "nu1", "nu2", "alpha", "beta"),
}


def format_value(v) -> str:
    """Text form used in result tables (6 significant digits for floats)."""
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        x = float(v)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return f"{x:.6g}"
    return str(v)


def results_text(rows: list, columns, seed: int, config_hash: str) -> str:
    """Render rows (dicts) as CSV with ``seed`` and ``config_hash`` appended to every row."""
    cols = list(columns) + ["seed", "config_hash"]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for r in rows:
        extra = set(r) - set(columns)
        if extra:
            raise ValueError(f"row has columns outside the schema: {sorted(extra)}")
        w.writerow([format_value(r.get(c)) for c in columns] + [str(seed), config_hash])
    return buf.getvalue()


def write_results(path, rows: list, columns, seed: int, config_hash: str) -> Path:
    path = Path(path)
    path.write_text(results_text(rows, columns, seed, config_hash), encoding="utf-8")
    return path


def read_results(path) -> tuple[list, list]:
    """Header and rows (dicts of strings) of a result table; ``#`` lines are skipped."""
    with open(path, encoding="utf-8", newline="") as fh:
        lines = [ln for ln in fh if not ln.startswith("#")]
    reader = csv.DictReader(lines)
    rows = list(reader)
    return list(reader.fieldnames or []), rows


def _full(x: float) -> str:
    return repr(float(x))


def write_spectral_field(path, c: SpectralField) -> Path:
    """Columns ``n1[, n2], re, im`` in index order."""
    path = Path(path)
    idx = np.indices(c.coeffs.shape).reshape(c.d, -1).T
    vals = c.coeffs.ravel()
    names = [f"n{i + 1}" for i in range(c.d)]
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(f"# spectral d={c.d} n_max={c.n_max}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(names + ["re", "im"])
        for n, v in zip(idx, vals):
            w.writerow([*map(int, n), _full(v.real), _full(v.imag)])
    return path


def read_spectral_field(path) -> SpectralField:
    _, rows = read_results(path)
    if not rows:
        raise ValueError("empty spectral field file")
    d = sum(1 for k in rows[0] if k.startswith("n"))
    n = int(round(len(rows) ** (1.0 / d)))
    out = np.zeros((n,) * d, dtype=complex)
    for r in rows:
        out[tuple(int(r[f"n{i + 1}"]) for i in range(d))] = complex(float(r["re"]), float(r["im"]))
    return SpectralField(out)


def write_sampled_field(path, f: SampledField) -> Path:
    """Columns ``[t,] x1[, x2], re, im`` in grid order (C order over ``values``)."""
    path = Path(path)
    axes = list(f.axes)
    names = [f"x{i + 1}" for i in range(f.d)]
    if f.times is not None:
        axes = [f.times] + axes
        names = ["t"] + names
    mesh = np.meshgrid(*axes, indexing="ij")
    vals = np.asarray(f.values, dtype=complex).ravel()
    with open(path, "w", encoding="utf-8", newline="") as fh:
        for nm, a in zip(names, axes):
            step = float(a[1] - a[0]) if len(a) > 1 else 0.0
            fh.write(f"# {nm} start={_full(a[0])} step={_full(step)} n={len(a)}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(names + ["re", "im"])
        cols = [m.ravel() for m in mesh]
        for j, v in enumerate(vals):
            w.writerow([_full(c[j]) for c in cols] + [_full(v.real), _full(v.imag)])
    return path


def read_sampled_field(path) -> SampledField:
    header, rows = read_results(path)
    coords = [h for h in header if h not in ("re", "im")]
    cols = {h: np.array([float(r[h]) for r in rows]) for h in coords}
    axes = [np.unique(cols[h]) for h in coords]
    shape = tuple(len(a) for a in axes)
    vals = np.array([complex(float(r["re"]), float(r["im"])) for r in rows]).reshape(shape)
    if coords and coords[0] == "t":
        return SampledField(tuple(axes[1:]), vals, times=axes[0])
    return SampledField(tuple(axes), vals)


def write_sector_cover(path, cover: SectorCover) -> Path:
    """Columns ``index, r, nu1[, nu2], alpha, beta``."""
    path = Path(path)
    names = ["index", "r"] + [f"nu{i + 1}" for i in range(cover.d)] + ["alpha", "beta"]
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(names)
        for row in cover.rows():
            w.writerow([row[0]] + [_full(v) for v in row[1:]])
    return path
