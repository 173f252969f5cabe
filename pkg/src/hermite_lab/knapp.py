"""Knapp-type test data for the Klein-Gordon extension operator.

All constructions live in rescaled variables: frequencies in the unit annulus,
rescaled mass ``mu = m / N`` and time window ``[0, N]``. Ratios are reported in
the original normalisation, i.e. for ``t`` in ``[0, 1]``, which amounts to the
factor ``N^{-1/p}``.
"""
from __future__ import annotations

import numpy as np

from .fields import SampledField
from .fourier import (FrequencyWindow, UniformGrid, extension_slices,
                      inverse, lp_norm, midpoint_times, smooth_step)

__all__ = [
    "REGIMES",
    "regime_box",
    "knapp_box",
    "bump",
    "anisotropic_data",
    "isotropic_data",
    "theta",
    "knapp_grid",
    "spacetime_lp",
    "knapp_ratio",
    "pointwise_ratio",
    "transport_correlation",
    "required_exponent",
    "curvature_spectrum",
    "regime_of",
]

REGIMES = ("elliptic", "wave", "pointwise", "conjecture_hermite")


def regime_box(N: float, mu: float) -> tuple[float, float]:
    """Full side lengths ``(radial, angular)`` of the anisotropic Knapp box.

    ``mu <= 1``: ``(N^{-1/2}/mu, N^{-1/2})``; ``mu >= 1``: both ``N^{-1/2} mu^{1/2}``.
    """
    if N <= 0 or mu <= 0:
        raise ValueError("N and mu must be positive")
    if mu * np.sqrt(N) < 1 - 1e-12:
        raise ValueError("anisotropic Knapp box needs mu >= N^{-1/2}")
    if mu <= 1:
        return N ** -0.5 / mu, N ** -0.5
    s = N ** -0.5 * mu ** 0.5
    return s, s


def knapp_box(N: float, mu: float) -> tuple[float, float]:
    """:func:`regime_box`, or the wave box ``(3/4, N^{-1/2})`` when ``mu < N^{-1/2}``.

    The radial side ``3/4`` keeps the smoothed box inside the plateau of the
    unit-annulus window.
    """
    if mu * np.sqrt(N) >= 1 - 1e-12:
        return regime_box(N, mu)
    return 0.75, N ** -0.5


def bump(s, half: float) -> np.ndarray:
    """Smoothed indicator of ``[-half, half]`` with transition width ``half/4`` outside it."""
    s = np.abs(np.asarray(s, dtype=float))
    return 1.0 - smooth_step((s - half) / (half / 4))


def knapp_grid(d: int, N: float, mu: float, dx: float = 0.5, travel: float | None = None) -> UniformGrid:
    """Periodic grid large enough to hold the data while it travels for time ``travel`` (default ``N``)."""
    travel = N if travel is None else travel
    radial, angular = knapp_box(N, mu)
    spread = 16.0 / min(radial, angular)
    length = 2 * travel + 2 * spread + 16
    pts = int(2 ** np.ceil(np.log2(length / dx)))
    return UniformGrid(d, pts, pts * dx)


def anisotropic_data(grid: UniformGrid, N: float, mu: float, direction=None,
                     scale: float = 1.0) -> SampledField:
    """Knapp example: ``g^`` is a product of bumps on the regime box centred at ``xi0``.

    ``scale`` multiplies both side lengths (``1`` is the regime box; below
    ``mu = N^{-1/2}`` the wave box of :func:`knapp_box` is used).
    """
    radial, angular = knapp_box(N, mu)
    radial, angular = scale * radial, scale * angular
    xi = grid.freq_mesh()
    e = np.zeros(grid.d)
    e[0] = 1.0
    if direction is not None:
        e = np.asarray(direction, dtype=float)
        e = e / np.linalg.norm(e)
    along = sum(k * ei for k, ei in zip(xi, e)) - 1.0
    ghat = bump(along, radial / 2)
    if grid.d == 2:
        across = -xi[0] * e[1] + xi[1] * e[0]
        ghat = ghat * bump(across, angular / 2)
    return grid.field(inverse(grid, ghat))


def theta(r) -> np.ndarray:
    """Radial bump equal to 1 on ``[3/4, 3/2]``, vanishing outside ``[5/8, 13/8]``.

    Its support sits where the unit-annulus window is identically 1.
    """
    r = np.asarray(r, dtype=float)
    return smooth_step((r - 0.625) / 0.125) * (1.0 - smooth_step((r - 1.5) / 0.125))


def isotropic_data(grid: UniformGrid, mu: float, focus_time: float) -> SampledField:
    """``g^ = theta(xi) exp(-i T sqrt(|xi|^2 + mu^2))``, which refocuses at time ``T``."""
    xi = grid.freq_mesh()
    r2 = sum(k * k for k in xi)
    ghat = theta(np.sqrt(r2)) * np.exp(-1j * focus_time * np.sqrt(r2 + mu * mu))
    return grid.field(inverse(grid, ghat))


def spacetime_lp(g: SampledField, mu: float, p: float, times, window=None,
                 mask=None, batch: int = 32) -> float:
    """``L^p`` norm of ``S_mu g`` over the given (uniform) times, by streaming slices.

    ``mask(x_axes, t_batch)`` may return a weight array (same shape as the
    slice batch) restricting or weighting the region.
    """
    window = window or FrequencyWindow("annulus")
    times = np.asarray(times, dtype=float)
    dt = times[1] - times[0] if len(times) > 1 else 1.0
    vol = g.cell_volume() * dt
    acc = 0.0
    peak = 0.0
    for tb, u in extension_slices(g, mu, window, times, batch=batch):
        a = np.abs(u)
        w = 1.0 if mask is None else mask(g.axes, tb)
        if np.isinf(p):
            peak = max(peak, float((a * (np.asarray(w) > 0)).max()))
        else:
            acc += float(np.sum(w * a ** p))
    if np.isinf(p):
        return peak
    return (acc * vol) ** (1.0 / p)


def knapp_ratio(N: float, mu: float, p: float, d: int = 1, dt: float = 0.5) -> float:
    """``||S_{m^2} f||_{L^p([0,1] x R^d)} / ||f||_p`` for the anisotropic example, original scaling."""
    grid = knapp_grid(d, N, mu)
    g = anisotropic_data(grid, N, mu)
    n_t = max(int(np.ceil(N / dt)), 1)
    num = spacetime_lp(g, mu, p, midpoint_times(0.0, N, n_t))
    return float(N ** (-1.0 / p) * num / lp_norm(g, p))


def pointwise_ratio(N: float, mu: float, p: float, d: int = 1, dx: float = 0.4) -> float:
    """Fixed-time ratio ``||S f(., 1)||_p / ||f||_p`` for isotropic focusing data.

    In rescaled variables the data refocus at ``t = N``; the ratio is scale
    invariant so no further normalisation is needed.
    """
    grid = knapp_grid(d, N, mu, dx=dx)
    g = isotropic_data(grid, mu, focus_time=N)
    _, u = next(extension_slices(g, mu, FrequencyWindow("annulus"), [N]))
    return float(lp_norm(grid.field(u[0]), p) / lp_norm(g, p))


def transport_correlation(N: float, mu: float, t: float, d: int = 1, scale: float = 1.0) -> float:
    """Cosine similarity of ``|S g|(., t)`` and the transported profile ``|g|(x + t v)``.

    ``v = xi0 / sqrt(|xi0|^2 + mu^2)`` with ``xi0 = e_1``; ``scale`` enlarges the box.
    The phase ``x.xi + t omega(xi)`` is stationary at ``x = -t grad omega``, so
    packets travel towards negative ``x_1``.
    """
    grid = knapp_grid(d, N, mu, travel=max(t, 1.0))
    g = anisotropic_data(grid, N, mu, scale=scale)
    _, u = next(extension_slices(g, mu, FrequencyWindow("annulus"), [t]))
    v = 1.0 / np.sqrt(1.0 + mu * mu)
    shift = int(round(t * v / grid.dx))
    ref = np.abs(np.roll(g.values, -shift, axis=0))
    a = np.abs(u[0])
    return float(np.sum(a * ref) / np.sqrt(np.sum(a * a) * np.sum(ref * ref)))


def required_exponent(d: int, p: float, regime: str) -> float:
    """Exponents below which the corresponding smoothing estimate fails."""
    if p < 1:
        raise ValueError("p must be >= 1")
    q = 0.0 if np.isinf(p) else 1.0 / p
    if regime == "elliptic":
        return max(d * (0.5 - q) - q, 0.0)
    if regime == "wave":
        return max((d - 1) * (0.5 - q) - q, 0.0)
    if regime == "pointwise":
        return d * abs(0.5 - q)
    if regime == "conjecture_hermite":
        return max(d * abs(0.5 - q) - 0.5, 0.0)
    raise ValueError(f"unknown regime {regime!r}; expected one of {REGIMES}")


def curvature_spectrum(xi, m: float) -> dict:
    """Principal curvatures of ``xi -> sqrt(|xi|^2 + m^2)``.

    Radial ``m^2 / (|xi|^2 + m^2)^{3/2}``; angular ``(|xi|^2 + m^2)^{-1/2}``
    with multiplicity ``d - 1``.
    """
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    r2 = float(xi @ xi)
    w = r2 + m * m
    if w == 0:
        raise ValueError("curvature undefined at xi = 0, m = 0")
    return {"radial": m * m / w ** 1.5, "angular": w ** -0.5, "angular_multiplicity": xi.size - 1}


def regime_of(N: float, m: float, slack: float = 1.0) -> str:
    """Tag ``(N, m)``: ``wave`` if ``m^2 <~ N``, ``elliptic`` if ``N <~ m^2 <~ N^3``, else ``stationary``."""
    m2 = m * m
    if m2 <= slack * N:
        return "wave"
    if m2 <= slack * N ** 3:
        return "elliptic"
    return "stationary"
