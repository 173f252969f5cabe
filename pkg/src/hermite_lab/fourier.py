"""FFT-based Klein-Gordon extension operators, frequency cutoffs and space-time norms.

Conventions: ``f^(xi) = int f(x) exp(-i x.xi) dx`` with inverse factor
``(2 pi)^{-d}``. The extension operator with mass ``m`` and frequency window
``chi`` is

    S f(x, t) = (2 pi)^{-d} int exp(i (x.xi + t sqrt(|xi|^2 + m^2))) chi(xi) f^(xi) dxi,

so that ``S f(., 0) = f`` whenever ``chi = 1`` on the support of ``f^``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from .fields import SampledField

__all__ = [
    "UniformGrid",
    "smooth_step",
    "chi0",
    "dyadic_cutoff",
    "annulus_cutoff",
    "FrequencyWindow",
    "make_chi_N",
    "project",
    "build_sector_cover",
    "Sector",
    "SectorCover",
    "sector_radial",
    "sector_angular",
    "forward",
    "inverse",
    "extension_kg",
    "extension_slices",
    "Region",
    "weight",
    "lp_norm",
    "lp_spacetime_norm",
    "midpoint_times",
    "ANNULUS_TRANSITION",
]

#: transition width of the smooth unit-annulus indicator
ANNULUS_TRANSITION = 1.0 / 8.0


@dataclass(frozen=True)
class UniformGrid:
    """Periodic tensor grid ``[-L/2, L/2)^d`` with ``points`` samples per axis."""

    d: int
    points: int
    length: float

    def __post_init__(self):
        if self.d not in (1, 2):
            raise ValueError("grids are implemented for d = 1, 2")
        if self.points < 2 or self.length <= 0:
            raise ValueError("need at least two points and a positive length")

    @property
    def dx(self) -> float:
        return self.length / self.points

    @property
    def axis(self) -> np.ndarray:
        return -self.length / 2 + self.dx * np.arange(self.points)

    @property
    def axes(self) -> tuple:
        return (self.axis,) * self.d

    @property
    def freq_axis(self) -> np.ndarray:
        return 2 * np.pi * np.fft.fftfreq(self.points, d=self.dx)

    @property
    def nyquist(self) -> float:
        return np.pi / self.dx

    def mesh(self) -> tuple:
        return np.meshgrid(*self.axes, indexing="ij")

    def freq_mesh(self) -> tuple:
        return np.meshgrid(*((self.freq_axis,) * self.d), indexing="ij")

    def freq_radius(self) -> np.ndarray:
        return np.sqrt(sum(k * k for k in self.freq_mesh()))

    def field(self, values) -> SampledField:
        return SampledField(self.axes, values)


def smooth_step(s) -> np.ndarray:
    """C-infinity step: 0 for ``s <= 0``, 1 for ``s >= 1``, built from ``exp(-1/s)``."""
    s = np.asarray(s, dtype=float)
    a = np.where(s > 0, np.exp(-1.0 / np.where(s > 0, s, 1.0)), 0.0)
    b = np.where(s < 1, np.exp(-1.0 / np.where(s < 1, 1.0 - s, 1.0)), 0.0)
    return a / (a + b)


def chi0(r) -> np.ndarray:
    """Radial cutoff equal to 1 on ``|xi| <= 1`` and 0 on ``|xi| >= 2``."""
    return 1.0 - smooth_step(np.asarray(r, dtype=float) - 1.0)


def dyadic_cutoff(r, N: float) -> np.ndarray:
    """``chi_N(xi) = chi0(xi / 2N) - chi0(xi / N)``, supported in ``N <= |xi| <= 4N``."""
    r = np.asarray(r, dtype=float)
    return chi0(r / (2 * N)) - chi0(r / N)


def annulus_cutoff(r, width: float = ANNULUS_TRANSITION) -> np.ndarray:
    """Smooth indicator of ``1/2 <= |xi| <= 2`` with transitions of the given width outside it."""
    r = np.asarray(r, dtype=float)
    return smooth_step((r - 0.5 + width) / width) * (1.0 - smooth_step((r - 2.0) / width))


@dataclass(frozen=True)
class FrequencyWindow:
    """Smooth frequency cutoff.

    ``kind`` is one of ``"all"``, ``"dyadic"`` (``chi_N`` with scale
    ``N``), ``"annulus"`` (unit annulus, dilated by ``N``), ``"ball"``
    (radius ``radius`` around ``center``, zero outside twice the radius) or
    ``"sector"`` (delegates to ``sector``).
    """

    kind: str = "all"
    N: float = 1.0
    center: tuple = ()
    radius: float = 1.0
    sector: "Sector | None" = None
    width: float = ANNULUS_TRANSITION

    def __call__(self, xi: tuple) -> np.ndarray:
        r = np.sqrt(sum(k * k for k in xi))
        if self.kind == "all":
            return np.ones_like(r)
        if self.kind == "dyadic":
            return dyadic_cutoff(r, self.N)
        if self.kind == "annulus":
            return annulus_cutoff(r / self.N, self.width)
        if self.kind == "ball":
            c = self.center or (0.0,) * len(xi)
            dist = np.sqrt(sum((k - ci) ** 2 for k, ci in zip(xi, c)))
            return chi0(dist / self.radius)
        if self.kind == "sector":
            if self.sector is None:
                raise ValueError("sector window needs a Sector")
            return self.sector.cutoff(xi)
        raise ValueError(f"unknown window kind {self.kind!r}")


def make_chi_N(N: float) -> FrequencyWindow:
    """Littlewood-Paley window ``chi_N(xi) = chi0(xi / 2N) - chi0(xi / N)``."""
    if N <= 0:
        raise ValueError("N must be positive")
    return FrequencyWindow("dyadic", N=float(N))


@dataclass(frozen=True)
class Sector:
    """``{ |xi| in [r - alpha/2, r + alpha/2], |xi/|xi| - nu| <= beta }`` with a smooth cutoff.

    The cutoff is 1 on that core and vanishes outside the doubled region
    ``|(|xi| - r)| <= alpha``, ``|xi/|xi| - nu| <= 2 beta``. In one dimension
    ``nu = +-1`` selects a half-line and ``beta`` plays no role.

    ``transition`` in ``(0, 1]`` shrinks the fall-off zones to that fraction of
    the gap between core and doubled region; narrow transitions make
    neighbouring sectors nearly disjoint.
    """

    r: float
    nu: tuple
    alpha: float
    beta: float
    transition: float = 1.0

    def cutoff(self, xi: tuple) -> np.ndarray:
        rho = np.sqrt(sum(k * k for k in xi))
        radial = sector_radial(rho, self.r, self.alpha, self.transition)
        if len(xi) == 1:
            ang = (np.sign(xi[0]) == np.sign(self.nu[0])).astype(float)
        else:
            safe = np.where(rho > 0, rho, 1.0)
            gap = np.sqrt(sum((k / safe - n) ** 2 for k, n in zip(xi, self.nu)))
            ang = np.where(rho > 0, sector_angular(gap, self.beta, self.transition), 0.0)
        return radial * ang


def sector_radial(rho, r, alpha: float, transition: float = 1.0) -> np.ndarray:
    """Radial factor of a sector cutoff: 1 for ``|rho - r| <= alpha/2``."""
    dev = np.abs(np.asarray(rho, dtype=float) - r) - alpha / 2
    return 1.0 - smooth_step(dev / (transition * alpha / 2))


def sector_angular(gap, beta: float, transition: float = 1.0) -> np.ndarray:
    """Angular factor as a function of the chord ``|xi/|xi| - nu|``: 1 for ``gap <= beta``."""
    return 1.0 - smooth_step((np.asarray(gap, dtype=float) - beta) / (transition * beta))


@dataclass(frozen=True)
class SectorCover:
    """Cover of the unit annulus ``1/2 <= |xi| <= 2`` by (alpha, beta)-sectors."""

    d: int
    alpha: float
    beta: float
    transition: float = 1.0
    sectors: tuple = field(default=(), compare=False)

    def __post_init__(self):
        if self.d not in (1, 2):
            raise ValueError("sector covers are implemented for d = 1, 2")
        if not (0 < self.alpha <= 1.5) or not (0 < self.beta <= 1):
            raise ValueError("need 0 < alpha <= 3/2 and 0 < beta <= 1")
        if not (0 < self.transition <= 1):
            raise ValueError("transition must lie in (0, 1]")
        n_r = int(np.ceil(1.5 / self.alpha - 1e-12))
        radii = 0.5 + (np.arange(n_r) + 0.5) * self.alpha
        if self.d == 1:
            dirs = [(1.0,), (-1.0,)]
        else:
            k = int(np.ceil(np.pi / (2 * np.arcsin(self.beta / 2)) - 1e-12))
            ang = 2 * np.pi * np.arange(k) / k
            dirs = [(float(np.cos(a)), float(np.sin(a))) for a in ang]
        secs = tuple(Sector(float(r), nu, self.alpha, self.beta, self.transition) for r in radii for nu in dirs)
        object.__setattr__(self, "sectors", secs)

    def __len__(self) -> int:
        return len(self.sectors)

    @property
    def radii(self) -> np.ndarray:
        return np.unique([s.r for s in self.sectors])

    @property
    def n_directions(self) -> int:
        return len(self.sectors) // len(self.radii)

    def total(self, xi: tuple) -> np.ndarray:
        """Pointwise sum of all sector cutoffs."""
        acc = np.zeros(np.shape(xi[0]))
        for s in self.sectors:
            acc += s.cutoff(xi)
        return acc

    def piece(self, i: int, xi: tuple, total: np.ndarray | None = None) -> np.ndarray:
        """Partition-of-unity element ``chi_i / sum_j chi_j`` (zero where the sum vanishes)."""
        tot = self.total(xi) if total is None else total
        c = self.sectors[i].cutoff(xi)
        return np.where(tot > 0, c / np.where(tot > 0, tot, 1.0), 0.0)

    def rows(self) -> list:
        """Serialisable rows ``(index, r, nu..., alpha, beta)``."""
        return [(i, s.r, *s.nu, s.alpha, s.beta) for i, s in enumerate(self.sectors)]


def build_sector_cover(alpha: float, beta: float, d: int, resolution: float | None = None,
                       transition: float = 1.0) -> SectorCover:
    """:class:`SectorCover` of the unit annulus, refusing sectors thinner than four grid steps.

    ``resolution`` is the frequency step ``2 pi / L`` of the grid the cover will be used on.
    """
    if resolution is not None:
        thin = alpha if d == 1 else min(alpha, beta)
        if thin < 4 * resolution:
            raise ValueError("sector below four grid resolutions: refine the frequency grid")
    return SectorCover(d, alpha, beta, transition)


def forward(grid: UniformGrid, values) -> np.ndarray:
    """Samples of ``f^`` on the FFT frequency grid (standard FFT ordering)."""
    v = np.asarray(values, dtype=complex)
    axes = tuple(range(v.ndim - grid.d, v.ndim))
    out = np.fft.fftn(v, axes=axes) * grid.dx ** grid.d
    return out * _shift_phase(grid, +1)


def inverse(grid: UniformGrid, fhat) -> np.ndarray:
    """Inverse of :func:`forward` (trailing ``d`` axes are spatial)."""
    fh = np.asarray(fhat, dtype=complex) * _shift_phase(grid, -1)
    axes = tuple(range(fh.ndim - grid.d, fh.ndim))
    return np.fft.ifftn(fh, axes=axes) / grid.dx ** grid.d


def _shift_phase(grid: UniformGrid, sign: int) -> np.ndarray:
    # grid starts at -L/2 rather than 0
    k = grid.freq_axis
    ph = np.exp(sign * 0.5j * k * grid.length)
    if grid.d == 1:
        return ph
    return ph[:, None] * ph[None, :]


def _check_alias(grid: UniformGrid, w: np.ndarray, fhat: np.ndarray) -> None:
    k = np.abs(grid.freq_axis)
    edge = k >= grid.nyquist - 2.5 * (2 * np.pi / grid.length)
    if grid.d == 1:
        mask = edge
    else:
        mask = edge[:, None] | edge[None, :]
    if np.any(np.abs(w[mask] * fhat[mask]) > 1e-12 * max(np.abs(fhat).max(), 1e-300)):
        raise ValueError("frequency window reaches the Nyquist band: refine the grid")


def extension_slices(f: SampledField, m: float, window: FrequencyWindow, times,
                     batch: int = 16, check_alias: bool = True) -> Iterator[tuple]:
    """Yield ``(t_batch, u_batch)`` with ``u = S f`` evaluated on blocks of times.

    Memory use is bounded by ``batch`` spatial slices.
    """
    grid = _grid_of(f)
    times = np.atleast_1d(np.asarray(times, dtype=float))
    fhat = forward(grid, f.values)
    xi = grid.freq_mesh()
    w = window(xi)
    if check_alias:
        _check_alias(grid, w, fhat)
    g = w * fhat
    omega = np.sqrt(sum(k * k for k in xi) + m * m)
    for i in range(0, len(times), batch):
        tb = times[i:i + batch]
        ph = np.exp(1j * tb.reshape((-1,) + (1,) * grid.d) * omega)
        yield tb, inverse(grid, ph * g)


def extension_kg(f: SampledField, m: float, window: FrequencyWindow, times,
                 check_alias: bool = True) -> SampledField:
    """Space-time samples of ``S f`` on ``times`` x spatial grid."""
    times = np.atleast_1d(np.asarray(times, dtype=float))
    parts = [u for _, u in extension_slices(f, m, window, times, check_alias=check_alias)]
    return SampledField(f.axes, np.concatenate(parts, axis=0), times=times)


def project(f: SampledField, window: FrequencyWindow, check_alias: bool = True) -> SampledField:
    """Fourier multiplier ``P f = (window f^)^vee`` on the periodic grid of ``f``."""
    grid = _grid_of(f)
    fhat = forward(grid, f.values)
    w = window(grid.freq_mesh())
    if check_alias:
        _check_alias(grid, w, fhat)
    return grid.field(inverse(grid, w * fhat))


def _grid_of(f: SampledField) -> UniformGrid:
    a = f.axes[0]
    n = len(a)
    dx = a[1] - a[0]
    L = n * dx
    for b in f.axes[1:]:
        if len(b) != n or abs(b[0] - a[0]) > 1e-9 * L:
            raise ValueError("extension needs the same uniform axis in every dimension")
    if abs(a[0] + L / 2) > 1e-9 * L:
        raise ValueError("extension expects a centred periodic grid [-L/2, L/2)")
    return UniformGrid(f.d, n, float(L))


@dataclass(frozen=True)
class Region:
    """Space-time region for norms: ``ball`` (centre, radius) or ``box`` (half-widths).

    Coordinates are ordered ``(x_1, ..., x_d, t)``.
    """

    kind: str = "ball"
    center: tuple = ()
    radius: float = 1.0
    half_widths: tuple = ()

    def distance(self, pts: tuple) -> np.ndarray:
        """Euclidean distance from each point to the region (0 inside)."""
        c = self.center or (0.0,) * len(pts)
        if self.kind == "ball":
            r = np.sqrt(sum((p - ci) ** 2 for p, ci in zip(pts, c)))
            return np.maximum(r - self.radius, 0.0)
        if self.kind == "box":
            hw = self.half_widths
            if len(hw) != len(pts):
                raise ValueError("box needs one half-width per coordinate")
            gaps = [np.maximum(np.abs(p - ci) - h, 0.0) for p, ci, h in zip(pts, c, hw)]
            return np.sqrt(sum(g * g for g in gaps))
        raise ValueError(f"unknown region kind {self.kind!r}")

    @property
    def scale(self) -> float:
        return self.radius if self.kind == "ball" else float(max(self.half_widths))


def weight(region: Region, pts: tuple, kind: str = "sharp", power: float = 20.0) -> np.ndarray:
    """``sharp`` indicator of the region or ``(1 + dist/R)^{-power}``."""
    dist = region.distance(pts)
    if kind == "sharp":
        return (dist == 0).astype(float)
    if kind == "poly":
        return (1.0 + dist / region.scale) ** (-power)
    raise ValueError("weight kind must be 'sharp' or 'poly'")


def lp_norm(f: SampledField, p: float) -> float:
    """Spatial ``L^p`` norm by Riemann sum (``p = inf`` allowed)."""
    v = np.abs(np.asarray(f.values))
    if np.isinf(p):
        return float(v.max())
    return float((np.sum(v ** p) * f.cell_volume()) ** (1.0 / p))


def midpoint_times(t0: float, t1: float, n: int) -> np.ndarray:
    """``n`` midpoint samples of ``[t0, t1]``; Riemann weights are ``(t1 - t0)/n``."""
    dt = (t1 - t0) / n
    return t0 + dt * (np.arange(n) + 0.5)


def lp_spacetime_norm(u: SampledField, p: float, region: Region | None = None,
                      weight_kind: str = "sharp", power: float = 20.0) -> float:
    """Weighted ``L^p`` norm over (x, t) by Riemann sum; time samples must be uniform."""
    if u.times is None:
        raise ValueError("field has no time axis")
    t = u.times
    dt = float(t[1] - t[0]) if len(t) > 1 else 1.0
    vol = u.cell_volume() * dt
    a = np.abs(np.asarray(u.values))
    if region is None:
        w = 1.0
    else:
        pts = np.meshgrid(*u.axes, t, indexing="ij")
        pts = tuple(np.moveaxis(q, -1, 0) for q in pts)
        w = weight(region, pts, weight_kind, power)
    if np.isinf(p):
        return float((a * (w > 0)).max()) if region is not None else float(a.max())
    return float((np.sum(w * a ** p) * vol) ** (1.0 / p))
