"""Hermite-function engine: basis evaluation, analysis/synthesis and spectral multipliers.

Hermite functions are generated by the normalised three-term recurrence

    h_0 = pi^{-1/4} exp(-x^2/2),
    h_{n+1} = sqrt(2/(n+1)) x h_n - sqrt(n/(n+1)) h_{n-1},

carried in scaled form so that very large degrees and far-out points neither
overflow nor underflow before the Gaussian factor is reapplied.  In two
dimensions everything is a tensor product and the eigenvalue of
``h_{n1}(x1) h_{n2}(x2)`` is ``2(n1+n2) + 2``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterator

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.special import roots_hermite

from .fields import SampledField, SpectralField

__all__ = [
    "eval_hermite",
    "iter_hermite",
    "hermite_functions",
    "hermite_rows",
    "HermiteBasis",
    "eigenvalues",
    "propagate",
    "spectral_projection",
    "bochner_riesz",
    "lens_check",
    "invariant_residuals",
    "KINDS",
]

KINDS = ("cos_sqrt", "exp_i_sqrt", "exp_iH")

_BIG = 1e150


def iter_hermite(n_max: int, x) -> Iterator[np.ndarray]:
    """Yield ``h_0(x), h_1(x), ..., h_{n_max}(x)`` one row at a time.

    Memory use is O(len(x)) regardless of ``n_max``.
    """
    x = np.asarray(x, dtype=float)
    if n_max < 0:
        raise ValueError("n_max must be non-negative")
    # value = a * exp(s); the mantissa a is kept away from overflow by
    # folding large factors into the exponent s.
    s = -0.5 * x * x
    prev = np.zeros_like(x)
    cur = np.full_like(x, np.pi ** -0.25)
    yield cur * np.exp(s)
    for n in range(n_max):
        nxt = np.sqrt(2.0 / (n + 1)) * x * cur - np.sqrt(n / (n + 1.0)) * prev
        prev, cur = cur, nxt
        big = np.abs(cur) > _BIG
        if big.any():
            scale = np.where(big, np.abs(cur), 1.0)
            cur = cur / scale
            prev = prev / scale
            s = s + np.log(scale)
        with np.errstate(under="ignore"):
            yield cur * np.exp(s)


def eval_hermite(n: int, x) -> np.ndarray:
    """``h_n(x)`` for a single degree."""
    if n < 0:
        raise ValueError("degree must be non-negative")
    for k, row in enumerate(iter_hermite(n, np.atleast_1d(x))):
        if k == n:
            return row if np.ndim(x) else row[0]


def hermite_functions(n_max: int, x) -> np.ndarray:
    """Matrix ``H[n, j] = h_n(x_j)`` for ``0 <= n <= n_max``."""
    x = np.asarray(x, dtype=float)
    out = np.empty((n_max + 1, x.size))
    for n, row in enumerate(iter_hermite(n_max, x.ravel())):
        out[n] = row
    return out


def hermite_rows(degrees, x) -> np.ndarray:
    """Rows ``h_n(x)`` for an arbitrary set of degrees (returned in the given order)."""
    degrees = np.asarray(degrees, dtype=int)
    x = np.asarray(x, dtype=float).ravel()
    if degrees.size == 0:
        return np.empty((0, x.size))
    want = {int(n): i for i, n in enumerate(degrees)}
    out = np.empty((degrees.size, x.size))
    for n, row in enumerate(iter_hermite(int(degrees.max()), x)):
        i = want.get(n)
        if i is not None:
            out[i] = row
    return out


def _grid_extent(n_max: int, d: int) -> float:
    lam = 2 * n_max + d
    return max(1.5 * np.sqrt(lam), np.sqrt(lam) + 8.0)


def _grid_points(n_max: int, d: int, extent: float) -> int:
    # the trapezoid rule integrates products h_n h_m exactly once the step
    # resolves their top frequency 2 sqrt(lambda_max)
    kmax = 2.0 * np.sqrt(2 * n_max + d) + 6.0
    m = int(np.ceil(2 * extent * kmax / (2 * np.pi)))
    return int(2 ** np.ceil(np.log2(max(m, 16))))


@dataclass(frozen=True)
class HermiteBasis:
    """Truncated Hermite basis with an evaluation grid and Gauss-Hermite quadrature.

    Parameters
    ----------
    d : int
        Spatial dimension (1 or 2).
    n_max : int
        Largest degree per axis.
    points : int, optional
        Number of uniform grid points per axis. The default resolves every
        retained Hermite function.
    extent : float, optional
        Half-width of the uniform grid.
    """

    d: int
    n_max: int
    points: int | None = None
    extent: float | None = None

    def __post_init__(self):
        if self.d not in (1, 2):
            raise ValueError("only d = 1 and d = 2 are supported")
        if self.n_max < 0:
            raise ValueError("n_max must be non-negative")
        ext = self.extent if self.extent is not None else _grid_extent(self.n_max, self.d)
        pts = self.points if self.points is not None else _grid_points(self.n_max, self.d, ext)
        object.__setattr__(self, "extent", float(ext))
        object.__setattr__(self, "points", int(pts))

    @cached_property
    def grid(self) -> np.ndarray:
        """Uniform periodic-style grid ``-extent + j*dx`` on one axis."""
        dx = 2 * self.extent / self.points
        return -self.extent + dx * np.arange(self.points)

    @property
    def dx(self) -> float:
        return 2 * self.extent / self.points

    @cached_property
    def matrix(self) -> np.ndarray:
        """``h_n`` sampled on :attr:`grid`, shape ``(n_max+1, points)``."""
        return hermite_functions(self.n_max, self.grid)

    @cached_property
    def quadrature(self) -> tuple[np.ndarray, np.ndarray]:
        """Gauss-Hermite nodes and Gaussian-free weights on one axis.

        Uses ``2*n_max + 1`` nodes. The weights are the Christoffel numbers
        rescaled by ``exp(x_i^2)``, computed as ``1 / sum_k h_k(x_i)^2`` so
        that extreme nodes do not underflow.
        """
        q = 2 * self.n_max + 1
        nodes, _ = roots_hermite(q)
        acc = np.zeros_like(nodes)
        for row in iter_hermite(q - 1, nodes):
            acc += row * row
        return nodes, 1.0 / acc

    def eigenvalues(self) -> np.ndarray:
        return eigenvalues(self.n_max, self.d)

    def sampled(self, values, times=None) -> SampledField:
        return SampledField((self.grid,) * self.d, values, times=times)

    def analyze(self, f: SampledField) -> SpectralField:
        """Coefficients ``<f, h_n>`` of a field sampled on :attr:`grid` (trapezoid rule)."""
        if f.d != self.d or f.times is not None:
            raise ValueError("field dimension does not match basis")
        for a in f.axes:
            if a.shape != self.grid.shape or not np.allclose(a, self.grid, rtol=0, atol=1e-12):
                raise ValueError("field is not sampled on the basis grid")
        H = self.matrix
        v = np.asarray(f.values, dtype=complex)
        if self.d == 1:
            c = H @ v * self.dx
        else:
            c = H @ v @ H.T * self.dx ** 2
        return SpectralField(c)

    def analyze_function(self, func) -> SpectralField:
        """Coefficients of a callable by Gauss-Hermite quadrature (exact on the span)."""
        nodes, w = self.quadrature
        H = hermite_functions(self.n_max, nodes)
        if self.d == 1:
            vals = np.asarray(func(nodes), dtype=complex)
            return SpectralField(H @ (w * vals))
        X1, X2 = np.meshgrid(nodes, nodes, indexing="ij")
        vals = np.asarray(func(X1, X2), dtype=complex)
        return SpectralField((H * w) @ vals @ (H * w).T)

    def synthesize(self, c: SpectralField, points=None) -> SampledField:
        """Evaluate ``sum_n c_n h_n`` on the basis grid or on given 1-D ``points`` per axis."""
        if c.d != self.d:
            raise ValueError("coefficient dimension does not match basis")
        if c.n_max != self.n_max:
            raise ValueError("coefficient n_max does not match basis")
        x = self.grid if points is None else np.asarray(points, dtype=float)
        H = self.matrix if points is None else None
        if self.d == 1:
            vals = synthesize_1d(c.coeffs[None, :], x, H)[0]
        else:
            H = hermite_functions(self.n_max, x) if H is None else H
            vals = H.T @ c.coeffs @ H
        return SampledField((x,) * self.d, vals)


def synthesize_1d(C: np.ndarray, x, H: np.ndarray | None = None, block: int = 512) -> np.ndarray:
    """Evaluate many 1-D coefficient vectors at once.

    ``C`` has shape ``(k, n_max+1)``; the result has shape ``(k, len(x))``.
    Degrees whose coefficients vanish in every row are skipped, and the basis
    is generated in blocks so memory stays bounded for large ``n_max``.
    """
    C = np.atleast_2d(np.asarray(C, dtype=complex))
    x = np.asarray(x, dtype=float)
    if H is not None:
        return C @ H
    active = np.flatnonzero(np.any(C != 0, axis=0))
    out = np.zeros((C.shape[0], x.size), dtype=complex)
    if active.size == 0:
        return out
    rows = np.empty((block, x.size))
    fill, idx = 0, []
    live = set(active.tolist())
    for n, row in enumerate(iter_hermite(int(active.max()), x)):
        if n in live:
            rows[fill] = row
            idx.append(n)
            fill += 1
            if fill == block:
                out += C[:, idx] @ rows
                fill, idx = 0, []
    if fill:
        out += C[:, idx] @ rows[:fill]
    return out


def eigenvalues(n_max: int, d: int = 1) -> np.ndarray:
    """``2|n| + d`` on the coefficient index grid."""
    n = np.arange(n_max + 1)
    if d == 1:
        return 2.0 * n + 1
    if d == 2:
        return 2.0 * (n[:, None] + n[None, :]) + 2
    raise ValueError("only d = 1 and d = 2 are supported")


def _multiplier(lam: np.ndarray, t, kind: str) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    tt = t.reshape(t.shape + (1,) * lam.ndim)
    if kind == "cos_sqrt":
        return np.cos(tt * np.sqrt(lam))
    if kind == "exp_i_sqrt":
        return np.exp(1j * tt * np.sqrt(lam))
    if kind == "exp_iH":
        return np.exp(1j * tt * lam)
    raise ValueError(f"unknown propagator kind {kind!r}; expected one of {KINDS}")


def propagate(c: SpectralField, t, kind: str = "exp_i_sqrt"):
    """Apply ``cos(t sqrt(H))``, ``exp(i t sqrt(H))`` or ``exp(i t H)``.

    A scalar ``t`` returns a :class:`SpectralField`; an array of times returns
    the stacked coefficient array with time as the leading axis.
    """
    lam = eigenvalues(c.n_max, c.d)
    m = _multiplier(lam, t, kind)
    if np.ndim(t) == 0:
        return SpectralField(m * c.coeffs)
    return m * c.coeffs


def spectral_projection(c: SpectralField, N: float, mode: str = "band") -> SpectralField:
    """Sharp projection onto ``N^2/4 <= lambda <= 4 N^2`` (``band``) or ``lambda <= 4 N^2`` (``below``).

    Acts on the stored coefficients only; a band reaching past ``n_max`` is
    silently truncated, so callers size the basis themselves.
    """
    if mode not in ("band", "below"):
        raise ValueError("mode must be 'band' or 'below'")
    lam = eigenvalues(c.n_max, c.d)
    keep = lam <= 4 * N * N
    if mode == "band":
        keep &= lam >= N * N / 4
    return SpectralField(np.where(keep, c.coeffs, 0))


def bochner_riesz(c: SpectralField, Lam: float, alpha: float) -> SpectralField:
    """Multiply by ``(1 - lambda/Lam)_+^alpha``; ``alpha = 0`` is the sharp cutoff ``lambda < Lam``."""
    if Lam <= 0:
        raise ValueError("Lam must be positive")
    if alpha < 0:
        raise ValueError("alpha must be non-negative")
    lam = eigenvalues(c.n_max, c.d)
    base = np.clip(1.0 - lam / Lam, 0.0, None)
    if alpha == 0:
        m = (lam < Lam).astype(float)
    else:
        m = base ** alpha
    return SpectralField(m * c.coeffs)


def lens_check(u0: SpectralField, t: float, *, points: int = 8192, length: float | None = None,
               window: float | None = None, min_cos: float = 0.1) -> dict:
    """Compare ``exp(-itH) u0`` with the lens transform of the free Schroedinger flow.

    With ``s = tan(2t)/2`` and ``v = exp(is Delta) u0`` (Fourier multiplier
    ``exp(-i s xi^2)``)::

        u(x, t) = cos(2t)^{-1/2} v(x / cos 2t, s) exp(-i x^2 tan(2t) / 2).

    ``v`` is computed by FFT on a periodic grid and read off at the dilated
    points with a cubic spline. Returns the relative sup-norm and ``L^2``
    residuals over the comparison window together with both fields.
    """
    if u0.d != 1:
        raise ValueError("lens_check is implemented for d = 1")
    c2 = np.cos(2 * t)
    if c2 < min_cos:
        raise ValueError(f"cos(2t) = {c2:.3g} below {min_cos}: lens transform too singular")
    n_max = u0.n_max
    reach = np.sqrt(2 * n_max + 1)
    s = np.tan(2 * t) / 2
    if window is None:
        window = reach + 4.0
    if length is None:
        # room for the free evolution to spread without wrapping
        length = 4.0 * (reach + 6.0) * (1 + 2 * abs(s)) + 2 * window / c2
    dx = length / points
    x = -length / 2 + dx * np.arange(points)
    u0_grid = synthesize_1d(u0.coeffs[None, :], x)[0]
    xi = 2 * np.pi * np.fft.fftfreq(points, d=dx)
    v = np.fft.ifft(np.fft.fft(u0_grid) * np.exp(-1j * s * xi * xi))
    xe = np.linspace(-window, window, 2049)
    y = xe / c2
    if np.abs(y).max() > x[-1]:
        raise ValueError("comparison window leaves the FFT grid")
    v_at = CubicSpline(x, v.real)(y) + 1j * CubicSpline(x, v.imag)(y)
    lens = c2 ** -0.5 * v_at * np.exp(-0.5j * xe * xe * np.tan(2 * t))
    ut = propagate(u0, -t, "exp_iH")
    direct = synthesize_1d(ut.coeffs[None, :], xe)[0]
    resid = np.abs(lens - direct).max() / np.abs(direct).max()
    l2 = np.linalg.norm(lens - direct) / np.linalg.norm(direct)
    return {"t": float(t), "s": float(s), "residual": float(resid), "residual_l2": float(l2), "x": xe,
            "spectral": direct, "lens": lens}


def invariant_residuals(n_max: int = 128, d: int = 1, eig_max: int = 100,
                        rng: np.random.Generator | None = None) -> dict:
    """Residuals of the basic identities of the engine.

    ``orthonormality``: ``max |<h_n, h_k> - delta_nk|`` by Gauss-Hermite
    quadrature. ``eigen_relation``: ``max_n ||-h_n'' + x^2 h_n - (2n+1) h_n||_inf / (2n+1)``
    for ``n <= eig_max`` with the second derivative taken by FFT on the basis
    grid. ``unitarity`` and ``group_law``: relative errors of the propagators
    on random coefficients (``d`` sets the dimension of that test).
    """
    rng = np.random.default_rng(0) if rng is None else rng
    b = HermiteBasis(1, n_max)
    nodes, w = b.quadrature
    H = hermite_functions(n_max, nodes)
    gram = (H * w) @ H.T
    ortho = float(np.abs(gram - np.eye(n_max + 1)).max())

    ne = min(eig_max, n_max)
    x = b.grid
    k = 2 * np.pi * np.fft.fftfreq(x.size, d=b.dx)
    Hg = b.matrix[: ne + 1]
    d2 = np.fft.ifft(-(k * k) * np.fft.fft(Hg, axis=1), axis=1).real
    lam = 2.0 * np.arange(ne + 1) + 1
    eig = float((np.abs(-d2 + (x * x) * Hg - lam[:, None] * Hg).max(axis=1) / lam).max())

    shape = (n_max + 1,) * d
    c = SpectralField(rng.normal(size=shape) + 1j * rng.normal(size=shape))
    s, t = rng.uniform(-1, 1, 2)
    unit = 0.0
    group = 0.0
    for kind in ("exp_i_sqrt", "exp_iH"):
        u = propagate(c, t, kind)
        unit = max(unit, abs(u.norm() - c.norm()) / c.norm())
        two = propagate(propagate(c, s, kind), t, kind).coeffs
        one = propagate(c, s + t, kind).coeffs
        group = max(group, float(np.abs(two - one).max() / np.abs(c.coeffs).max()))
    # cos(t sqrt H) satisfies cos(s)cos(t) = (cos(s+t) + cos(s-t))/2
    cc = propagate(propagate(c, s, "cos_sqrt"), t, "cos_sqrt").coeffs
    half = 0.5 * (propagate(c, s + t, "cos_sqrt").coeffs + propagate(c, s - t, "cos_sqrt").coeffs)
    group = max(group, float(np.abs(cc - half).max() / np.abs(c.coeffs).max()))
    return {"n_max": n_max, "d": d, "orthonormality": ortho, "eigen_relation": eig,
            "unitarity": float(unit), "group_law": group}
