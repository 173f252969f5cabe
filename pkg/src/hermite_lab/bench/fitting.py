"""Log-log regression helpers."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["LogLogFit", "loglog_fit", "ExponentFit", "exponent_fit"]


@dataclass(frozen=True)
class LogLogFit:
    slope: float
    intercept: float
    residual: float

    def predict(self, x) -> np.ndarray:
        return np.exp(self.intercept) * np.asarray(x, dtype=float) ** self.slope


def loglog_fit(x, y) -> LogLogFit:
    """Least-squares line through ``(log x, log y)``; ``residual`` is the RMS misfit in log space."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.size < 2 or x.size != y.size:
        raise ValueError("need at least two matching points")
    if np.any(x <= 0) or np.any(y <= 0):
        raise ValueError("log-log fit needs positive data")
    lx, ly = np.log(x), np.log(y)
    slope, icpt = np.polyfit(lx, ly, 1)
    res = float(np.sqrt(np.mean((ly - (slope * lx + icpt)) ** 2)))
    return LogLogFit(float(slope), float(icpt), res)


@dataclass(frozen=True)
class ExponentFit:
    """Slope of ``log2 value`` against ``log2 N`` with the samples it came from."""

    log2_N: np.ndarray
    log2_value: np.ndarray
    slope: float
    intercept: float
    max_residual: float

    def predict(self, N) -> np.ndarray:
        """Fitted value at ``N``; refuses to extrapolate beyond the sampled range."""
        lg = np.log2(np.asarray(N, dtype=float))
        lo, hi = self.log2_N.min(), self.log2_N.max()
        if np.any(lg < lo - 1e-12) or np.any(lg > hi + 1e-12):
            raise ValueError("N outside the fitted range")
        return 2.0 ** (self.intercept + self.slope * lg)


def exponent_fit(Ns, values, min_points: int = 4) -> ExponentFit:
    """Least-squares exponent fit over at least ``min_points`` samples."""
    Ns = np.asarray(Ns, dtype=float)
    values = np.asarray(values, dtype=float)
    if Ns.size < min_points:
        raise ValueError(f"exponent fits need at least {min_points} values of N")
    if np.any(values <= 0) or np.any(Ns <= 0):
        raise ValueError("exponent fits need positive data")
    lx, ly = np.log2(Ns), np.log2(values)
    slope, icpt = np.polyfit(lx, ly, 1)
    res = float(np.abs(ly - (slope * lx + icpt)).max())
    return ExponentFit(lx, ly, float(slope), float(icpt), res)
