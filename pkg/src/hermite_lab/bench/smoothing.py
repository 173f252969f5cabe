"""Local smoothing, fixed-time and Hermite/Klein-Gordon consistency measurements.

Local smoothing ratios use rescaled variables: data frequency-localised to the
unit annulus, rescaled mass ``mu = m / N``, time window ``[0, N]`` and all of
space. The reported exponent is ``s_bar = s + 1/p``, the growth rate of

    ||S_mu f||_{L^p([0, N] x R^d)} / ||f||_{L^p(R^d)}

in ``N`` (set ``convention="s"`` to subtract ``1/p``).
"""
from __future__ import annotations

import numpy as np
from scipy.special import gammaln

from ..fields import SpectralField
from ..fourier import inverse, lp_norm, midpoint_times
from ..knapp import (anisotropic_data, isotropic_data, knapp_grid, pointwise_ratio,
                     spacetime_lp, theta)
from ..spectral import eigenvalues, iter_hermite, spectral_projection
from .fitting import ExponentFit, exponent_fit

__all__ = [
    "DATA_GENERATORS",
    "smoothing_ratio",
    "fit_smoothing_exponent",
    "pointwise_fixed_time",
    "coherent_state",
    "hermite_smoothing_ratio",
    "hermite_kg_consistency",
]

DATA_GENERATORS = ("knapp_aniso", "knapp_iso", "random", "max")


def _random_data(grid, rng):
    xi = grid.freq_mesh()
    r = np.sqrt(sum(k * k for k in xi))
    z = rng.normal(size=r.shape) + 1j * rng.normal(size=r.shape)
    return grid.field(inverse(grid, theta(r) * z))


def smoothing_ratio(N: float, mu: float, p: float, d: int = 1, data_gen: str = "knapp_aniso",
                    draws: int = 8, rng: np.random.Generator | None = None, dt: float | None = None) -> float:
    """Largest ``||S_mu f||_{L^p([0,N] x R^d)} / ||f||_p`` over the chosen data family.

    ``knapp_aniso`` is the regime box example, ``knapp_iso`` focuses at
    ``t = N/2`` and ``random`` draws ``draws`` complex Gaussian spectra on
    the annulus.
    """
    if data_gen not in DATA_GENERATORS:
        raise ValueError(f"data_gen must be one of {DATA_GENERATORS}")
    if data_gen == "max":
        return max(smoothing_ratio(N, mu, p, d, g, draws, rng, dt) for g in ("knapp_aniso", "knapp_iso"))
    dt = (0.5 if d == 1 else 1.0) if dt is None else dt
    grid = knapp_grid(d, N, mu, dx=0.5 if d == 1 else 0.7)
    n_t = max(int(np.ceil(N / dt)), 1)
    times = midpoint_times(0.0, N, n_t)
    if data_gen == "knapp_aniso":
        fields = [anisotropic_data(grid, N, mu)]
    elif data_gen == "knapp_iso":
        fields = [isotropic_data(grid, mu, focus_time=N / 2)]
    else:
        rng = np.random.default_rng(0) if rng is None else rng
        fields = [_random_data(grid, rng) for _ in range(draws)]
    return max(spacetime_lp(g, mu, p, times) / lp_norm(g, p) for g in fields)


def fit_smoothing_exponent(p: float, d: int, mu, Ns, data_gen: str = "knapp_aniso",
                           convention: str = "s_bar", **kw) -> ExponentFit:
    """Exponent fit of :func:`smoothing_ratio` over ``Ns``.

    ``mu`` is a rescaled mass or a callable ``N -> mu``.
    """
    if convention not in ("s_bar", "s"):
        raise ValueError("convention must be 's_bar' or 's'")
    Ns = np.asarray(Ns, dtype=float)
    vals = []
    for N in Ns:
        m = mu(N) if callable(mu) else mu
        vals.append(smoothing_ratio(N, m, p, d, data_gen, **kw))
    fit = exponent_fit(Ns, vals)
    if convention == "s":
        q = 0.0 if np.isinf(p) else 1.0 / p
        fit = ExponentFit(fit.log2_N, fit.log2_value - q * fit.log2_N, fit.slope - q,
                          fit.intercept, fit.max_residual)
    return fit


def pointwise_fixed_time(N: float, m: float, p: float, d: int = 1, data_gen: str = "knapp_iso") -> float:
    """``||S f(., 1)||_p / ||f||_p`` in original scaling, i.e. rescaled mass ``m / N`` at time ``N``."""
    if data_gen != "knapp_iso":
        raise ValueError("fixed-time ratios use the isotropic focusing data")
    return pointwise_ratio(N, m / N, p, d)


def coherent_state(n_max: int, x0: float, xi0: float) -> SpectralField:
    """Hermite coefficients of ``pi^{-1/4} exp(-(x - x0)^2/2 + i xi0 (x - x0/2))``.

    ``c_n = exp(-|a|^2/2) a^n / sqrt(n!)`` with ``a = (x0 + i xi0)/sqrt(2)``,
    evaluated in logarithmic form.
    """
    a = (x0 + 1j * xi0) / np.sqrt(2)
    n = np.arange(n_max + 1)
    if abs(a) == 0:
        return SpectralField((n == 0).astype(complex))
    logmag = -abs(a) ** 2 / 2 + n * np.log(abs(a)) - 0.5 * gammaln(n + 1)
    return SpectralField(np.exp(logmag + 1j * n * np.angle(a)))


def hermite_smoothing_ratio(N: float, p: float, x0: float = 0.0, half_width: float = 8.0,
                            cutoff: float = 1e-16) -> float:
    """``||cos(t sqrt H) P_N f||_{L^p([0,1] x R)} / ||P_N f||_p`` for a packet at ``(x0, N)``.

    The basis holds ``n <= 2 N^2`` so that the band ``N^2/4 <= lambda <= 4N^2``
    fits. Degrees with ``|c_n| < cutoff`` are dropped and the field is
    evaluated on ``|x - x0| <= half_width``, which holds the packet for
    ``t <= 1``.
    """
    n_max = int(np.ceil(2 * N * N))
    c = spectral_projection(coherent_state(n_max, x0, N), N, "band").coeffs
    active = np.flatnonzero(np.abs(c) >= cutoff * np.abs(c).max())
    if active.size == 0:
        raise ValueError("projected packet is empty")
    dx = np.pi / (4 * np.sqrt(2 * active.max() + 1))
    x = x0 + np.arange(-half_width, half_width + dx / 2, dx)
    rows = np.empty((active.size, x.size))
    keep = set(active.tolist())
    k = 0
    for n, row in enumerate(iter_hermite(int(active.max()), x)):
        if n in keep:
            rows[k] = row
            k += 1
    ca = c[active]
    w = np.sqrt(eigenvalues(n_max)[active])
    f0 = ca @ rows
    # |u|^p oscillates at frequency up to 2 sqrt(lambda_max) in t
    n_t = int(np.ceil(8 * w.max() / np.pi)) + 16
    ts = midpoint_times(0.0, 1.0, n_t)
    acc = 0.0
    for t in ts:
        u = (ca * np.cos(t * w)) @ rows
        acc += np.sum(np.abs(u) ** p)
    num = (acc * dx / n_t) ** (1.0 / p)
    den = (np.sum(np.abs(f0) ** p) * dx) ** (1.0 / p)
    return float(num / den)


def hermite_kg_consistency(p: float = 4.0, Ns=(16, 16 * 2 ** 0.5, 32, 32 * 2 ** 0.5, 64),
                           x0: float = 0.0) -> dict:
    """Hermite-side slope over ``[0, 1]`` against the Klein-Gordon ``s = s_bar - 1/p``.

    The packet at ``(x0, N)`` has rescaled mass ``mu = |x0| / N`` on the
    Klein-Gordon side (``0`` for packets at the origin, the wave case).
    """
    Ns = np.asarray(Ns, dtype=float)
    herm = exponent_fit(Ns, [hermite_smoothing_ratio(N, p, x0) for N in Ns])
    kg = fit_smoothing_exponent(p, 1, lambda N: abs(x0) / N, Ns, "knapp_aniso", convention="s")
    return {"N": Ns, "hermite": herm, "kg": kg, "hermite_slope": herm.slope, "kg_slope": kg.slope,
            "difference": abs(herm.slope - kg.slope)}
