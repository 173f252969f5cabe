"""Discrete Kakeya maximal operator in the plane.

``M F(x) = max_omega sup_{T containing x} avg_T |F|`` over ``ceil(N^{1/2})`` equally
spaced directions ``omega`` and ``N^{1/2} x N`` tubes ``T`` with axis ``omega``.

Each direction is handled by a shear that makes the tube axis a grid axis,
two windowed cumulative sums (along and across the axis) giving the average
over the tube centred at every point, a rectangular max filter over the
centres whose tube contains the point, and the inverse shear. The sheared
tube is a parallelogram with the same centre line, width and area as the
rectangle; for ``N >> N^{1/2}`` the two differ only near the short ends.
Values outside the grid count as zero.
"""
from __future__ import annotations

import numpy as np
from scipy.ndimage import maximum_filter1d

from ..fields import SampledField

__all__ = ["kakeya_directions", "kakeya_maximal_2d", "tube_indicator", "bush", "bush_ratio"]


def kakeya_directions(N: float) -> np.ndarray:
    """``ceil(N^{1/2})`` angles equally spaced in ``[0, pi)``."""
    k = int(np.ceil(np.sqrt(N) - 1e-9))
    return np.pi * np.arange(k) / k


def _window_mean(a: np.ndarray, n: int, axis: int) -> np.ndarray:
    """Centred running mean of ``n`` samples along ``axis`` with zero padding."""
    n = max(int(n), 1)
    a = np.moveaxis(a, axis, 0)
    pad = np.zeros((1,) + a.shape[1:])
    c = np.concatenate([pad, np.cumsum(a, axis=0)], axis=0)
    L = a.shape[0]
    lo = np.clip(np.arange(L) - n // 2, 0, L)
    hi = np.clip(np.arange(L) - n // 2 + n, 0, L)
    out = (c[hi] - c[lo]) / n
    return np.moveaxis(out, 0, axis)


def _tube_average(F: np.ndarray, h: float, angle: float, N: float) -> np.ndarray:
    """Largest average of ``F`` over tubes of direction ``angle`` containing each grid point."""
    transpose = abs(np.cos(angle)) < abs(np.sin(angle))
    if transpose:
        F = F.T
        angle = np.pi / 2 - angle
    c, s = np.cos(angle), np.sin(angle)
    slope = s / c
    n0, n1 = F.shape
    i = np.arange(n0)
    shift = np.rint(slope * (i - n0 // 2)).astype(int)
    S = int(np.abs(shift).max(initial=0))
    # sheared array: G[i, j + S] = F[i, j + shift_i] (zero off-grid)
    G = np.zeros((n0, n1 + 2 * S))
    cols = np.arange(n1 + 2 * S) - S
    for r in range(n0):
        src = cols + shift[r]
        ok = (src >= 0) & (src < n1)
        G[r, ok] = F[r, src[ok]]
    n_len = int(round(N * abs(c) / h))
    n_wid = int(round(np.sqrt(N) / (abs(c) * h)))
    A = _window_mean(_window_mean(G, n_len, 0), n_wid, 1)
    # centres c with x in T(c) form the mirrored window; odd sizes keep it symmetric
    A = maximum_filter1d(A, 2 * (n_len // 2) + 1, axis=0, mode="constant", cval=0.0)
    A = maximum_filter1d(A, 2 * (n_wid // 2) + 1, axis=1, mode="constant", cval=0.0)
    out = np.empty_like(F, dtype=float)
    for r in range(n0):
        out[r] = A[r, np.arange(n1) - shift[r] + S]
    return out.T if transpose else out


def kakeya_maximal_2d(F: SampledField, N: float) -> SampledField:
    """``M F`` on the grid of ``F`` (uniform spacing, extent at least ``4N``)."""
    if F.d != 2:
        raise ValueError("Kakeya maximal operator needs a two-dimensional field")
    h = float(F.spacing[0])
    ext = min(len(a) * s for a, s in zip(F.axes, F.spacing))
    if ext < 4 * N * (1 - 1e-9):
        raise ValueError("grid extent must be at least 4N")
    if abs(F.spacing[1] - h) > 1e-12 * h:
        raise ValueError("Kakeya grid must be square")
    a = np.abs(np.asarray(F.values, dtype=float))
    out = np.zeros_like(a)
    for ang in kakeya_directions(N):
        np.maximum(out, _tube_average(a, h, ang, N), out=out)
    return SampledField(F.axes, out)


def _grid(N: float, h: float | None = None, extent: float = 4.0):
    h = np.sqrt(N) / 8 if h is None else h
    n = int(np.ceil(extent * N / h))
    n += n % 2
    x = h * (np.arange(n) - n // 2)
    return x, h


def tube_indicator(x: np.ndarray, N: float, angle: float, center=(0.0, 0.0)) -> np.ndarray:
    """Indicator of the ``N^{1/2} x N`` tube with the given axis angle and centre."""
    X, Y = np.meshgrid(x, x, indexing="ij")
    X, Y = X - center[0], Y - center[1]
    c, s = np.cos(angle), np.sin(angle)
    along = X * c + Y * s
    across = -X * s + Y * c
    return ((np.abs(along) <= N / 2) & (np.abs(across) <= np.sqrt(N) / 2)).astype(float)


def bush(N: float, h: float | None = None) -> SampledField:
    """Sum of ``ceil(N^{1/2})`` tubes through the origin, one per discretised direction."""
    x, h = _grid(N, h)
    F = sum(tube_indicator(x, N, a) for a in kakeya_directions(N))
    return SampledField((x, x), F)


def bush_ratio(N: float, h: float | None = None) -> dict:
    """``||M F||_2 / ||F||_2`` for the bush, with ``log(N)^2`` for comparison."""
    F = bush(N, h)
    MF = kakeya_maximal_2d(F, N)
    num = np.sqrt(np.sum(MF.values ** 2))
    den = np.sqrt(np.sum(F.values ** 2))
    r = float(num / den)
    return {"N": N, "ratio": r, "log2": float(np.log(N) ** 2), "normalised": r / float(np.log(N) ** 2),
            "directions": kakeya_directions(N).size, "grid_points": F.values.shape[0]}
