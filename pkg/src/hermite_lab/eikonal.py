"""Phase function of the half-wave Hermite propagator by the method of characteristics.

The phase solves ``d_t phi = sigma * sqrt(|x|^2 + |grad phi|^2)`` with
``phi(x, 0) = x.xi``; ``sigma = +1`` gives ``phi_1`` and ``sigma = -1`` gives
``phi_2``. Along characteristics ``r = |(x, eta)|`` is conserved and the flow
is a rotation by ``theta = t / r``::

    x(t)   = y cos(theta) - sigma xi sin(theta)
    eta(t) = xi cos(theta) + sigma y sin(theta)

The foot point ``y`` is recovered by Newton's method and the phase is the
closed-form action integral along the ray.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

__all__ = [
    "hamiltonian_flow",
    "PhaseResult",
    "solve_phase",
    "phase_excess",
    "phase_tt0",
    "pde_residual",
    "error_sups",
    "rescaled_error",
    "admissible_queries",
    "fourier_coefficients",
    "decay_exponent",
    "majorant_v_star",
    "majorant_breakdown_time",
    "HORIZON",
    "ADMISSIBLE_FRACTION",
]

#: solve only while |t| <= HORIZON * |(x, xi)| (rotation angle below about 1/2)
HORIZON = 0.5
#: admissible rescaled domain |t| <= N/4, |x - x0| <= N/4
ADMISSIBLE_FRACTION = 0.25

_COND_MAX = 1e8
_MAX_ITER = 50


def hamiltonian_flow(x, xi, t):
    """Flow of ``H = sqrt(|x|^2 + |xi|^2)``: rotation by ``t / |(x, xi)|`` in phase space."""
    x = np.asarray(x, dtype=float)
    xi = np.asarray(xi, dtype=float)
    r = np.sqrt(np.sum(x * x, axis=-1) + np.sum(xi * xi, axis=-1))
    th = (np.asarray(t, dtype=float) / r)[..., None]
    c, s = np.cos(th), np.sin(th)
    return x * c + xi * s, xi * c - x * s


@dataclass(frozen=True)
class PhaseResult:
    """Vectorised solution of the phase equation at a batch of queries.

    ``phi`` and ``excess = phi - x.xi`` are NaN wherever ``ok`` is false, with
    the cause in ``reason`` (``"caustic"``, ``"newton"`` or ``"horizon"``).
    """

    phi: np.ndarray
    excess: np.ndarray
    grad: np.ndarray
    foot: np.ndarray
    iterations: np.ndarray
    cond: np.ndarray
    ok: np.ndarray
    reason: np.ndarray


def _as_batch(x, t, xi):
    x = np.atleast_2d(np.asarray(x, dtype=float))
    xi = np.atleast_2d(np.asarray(xi, dtype=float))
    t = np.atleast_1d(np.asarray(t, dtype=float))
    q = max(x.shape[0], xi.shape[0], t.shape[0])
    x = np.broadcast_to(x, (q, x.shape[1])).copy()
    xi = np.broadcast_to(xi, (q, xi.shape[1])).copy()
    t = np.broadcast_to(t, (q,)).copy()
    if x.shape[1] != xi.shape[1]:
        raise ValueError("x and xi must have the same dimension")
    return x, t, xi


def solve_phase(x, t, xi, sigma: int = 1, tol: float = 1e-14) -> PhaseResult:
    """Phase ``phi_sigma(x, t; xi)`` for a batch of queries (rows of ``x``, ``xi``)."""
    if sigma not in (1, -1):
        raise ValueError("sigma must be +1 or -1")
    x, t, xi = _as_batch(x, t, xi)
    q, d = x.shape
    nx = np.sqrt(np.sum(x * x, 1) + np.sum(xi * xi, 1))
    horizon = np.abs(t) > HORIZON * nx
    # first-order guess: x ~ y - sigma t xi / r
    y = x + sigma * (t / np.where(nx > 0, nx, 1.0))[:, None] * xi
    xi2 = np.sum(xi * xi, 1)
    it = np.zeros(q, dtype=int)
    done = horizon.copy()
    cond = np.ones(q)
    eye = np.eye(d)
    for k in range(_MAX_ITER):
        act = ~done
        if not act.any():
            break
        ya, xa, xia, ta = y[act], x[act], xi[act], t[act]
        r = np.sqrt(np.sum(ya * ya, 1) + xi2[act])
        th = ta / r
        c, s = np.cos(th), np.sin(th)
        F = ya * c[:, None] - sigma * xia * s[:, None] - xa
        dth = -(ta / r ** 3)[:, None] * ya
        v = -ya * s[:, None] - sigma * xia * c[:, None]
        J = c[:, None, None] * eye + v[:, :, None] * dth[:, None, :]
        step = np.linalg.solve(J, F[..., None])[..., 0]
        y[act] = ya - step
        it[act] += 1
        small = np.sqrt(np.sum(step * step, 1)) <= tol * (1.0 + np.sqrt(np.sum(ya * ya, 1)))
        idx = np.flatnonzero(act)
        done[idx[small]] = True
        cond[act] = np.linalg.cond(J)
    newton_fail = ~done
    caustic = (cond > _COND_MAX) & ~horizon
    ok = ~(horizon | newton_fail | caustic)
    reason = np.full(q, "", dtype=object)
    reason[newton_fail] = "newton"
    reason[caustic] = "caustic"
    reason[horizon] = "horizon"

    r = np.sqrt(np.sum(y * y, 1) + xi2)
    th = t / r
    s, c = np.sin(th), np.cos(th)
    s2 = np.sin(2 * th)
    yy = np.sum(y * y, 1)
    yxi = np.sum(y * xi, 1)
    action = sigma * (yy * (th / 2 + s2 / 4) + xi2 * (th / 2 - s2 / 4) - sigma * yxi * s * s)
    # phi - x.xi with x = y cos - sigma xi sin; use 1 - cos = 2 sin^2(th/2)
    y_minus_x = y * (2 * np.sin(th / 2) ** 2)[:, None] + sigma * xi * s[:, None]
    excess = np.sum(y_minus_x * xi, 1) + action
    phi = excess + np.sum(x * xi, 1)
    grad = xi * c[:, None] + sigma * y * s[:, None]
    bad = ~ok
    phi[bad] = np.nan
    excess[bad] = np.nan
    return PhaseResult(phi, excess, grad, y, it, cond, ok, reason)


def phase_excess(x, t, xi, sigma: int = 1) -> np.ndarray:
    """``phi - x.xi``, raising if any query fails."""
    res = solve_phase(x, t, xi, sigma)
    if not res.ok.all():
        bad = np.flatnonzero(~res.ok)
        raise ValueError(f"phase solve failed at {bad.size} queries: {set(res.reason[bad])}")
    return res.excess


def phase_tt0(x, xi) -> np.ndarray:
    """Closed form ``d_t^2 phi(x, 0; xi) = x.xi / (|x|^2 + |xi|^2)``."""
    x = np.atleast_2d(x)
    xi = np.atleast_2d(xi)
    return np.sum(x * xi, -1) / (np.sum(x * x, -1) + np.sum(xi * xi, -1))


def pde_residual(x, t, xi, sigma: int = 1, h: float = 1e-4) -> np.ndarray:
    """``|d_t phi - sigma sqrt(|x|^2 + |grad phi|^2)| / sqrt(...)`` by central differences.

    Steps are ``h`` relative to ``max(1, |t|)`` in time and ``max(1, |x|)`` in space.
    """
    x, t, xi = _as_batch(x, t, xi)
    ht = h * np.maximum(1.0, np.abs(t))
    ft = (phase_excess(x, t + ht, xi, sigma) - phase_excess(x, t - ht, xi, sigma)) / (2 * ht)
    hx = (h * np.maximum(1.0, np.linalg.norm(x, axis=1)))[:, None]
    g = np.empty_like(x)
    for j in range(x.shape[1]):
        e = np.zeros(x.shape[1])
        e[j] = 1.0
        # excess + x.xi keeps the large linear part exact
        g[:, j] = (phase_excess(x + hx * e, t, xi, sigma)
                   - phase_excess(x - hx * e, t, xi, sigma)) / (2 * hx[:, 0]) + xi[:, j]
    p = np.sqrt(np.sum(x * x, 1) + np.sum(g * g, 1))
    return np.abs(ft - sigma * p) / p


def rescaled_error(x, t, xi, N: float, x0) -> np.ndarray:
    """``E_N = phi_N - x.xi - t sqrt(|xi|^2 + |x0|^2 / N^4)`` with ``phi_N(x,t;xi) = phi(x/N, t/N, N xi)``."""
    x, t, xi = _as_batch(x, t, xi)
    x0 = np.asarray(x0, dtype=float)
    ex = phase_excess(x / N, t / N, N * xi)
    return ex - t * np.sqrt(np.sum(xi * xi, 1) + float(x0 @ x0) / N ** 4)


def admissible_queries(N: float, x0, n: int, rng: np.random.Generator,
                       frac: float = ADMISSIBLE_FRACTION) -> tuple:
    """Random ``(x, t, xi)`` with ``|xi| in [1/2, 2]``, ``|t| <= frac N``, ``|x - x0| <= frac N``.

    Samples are drawn in normalised form so the same generator state yields
    comparable point clouds for every ``N``.
    """
    x0 = np.asarray(x0, dtype=float)
    d = x0.size
    u = rng.normal(size=(n, d))
    u /= np.linalg.norm(u, axis=1, keepdims=True)
    rad = rng.uniform(0, 1, n) ** (1.0 / d)
    dx = u * rad[:, None] * frac * N
    w = rng.normal(size=(n, d))
    w /= np.linalg.norm(w, axis=1, keepdims=True)
    xi = w * rng.uniform(0.5, 2.0, n)[:, None]
    t = rng.uniform(-frac * N, frac * N, n)
    return x0 + dx, t, xi


def error_sups(N: float, x0, n: int, rng: np.random.Generator, h: float = 1e-5) -> dict:
    """Sampled sups of ``|E_N|`` and ``|grad_xi E_N|`` over ``n`` admissible queries."""
    x0 = np.asarray(x0, dtype=float)
    x, t, xi = admissible_queries(N, x0, n, rng)
    E = rescaled_error(x, t, xi, N, x0)
    dE = 0.0
    for e in np.eye(x0.size):
        de = (rescaled_error(x, t, xi + h * e, N, x0) - rescaled_error(x, t, xi - h * e, N, x0)) / (2 * h)
        dE = max(dE, float(np.abs(de).max()))
    return {"N": N, "x0_norm": float(np.linalg.norm(x0)), "sup_E": float(np.abs(E).max()), "sup_dE": dE}


def _fourier_cutoff(r) -> np.ndarray:
    from .fourier import smooth_step
    # 1 on [1/2, 3/2], supported in [1/10, 39/20] inside B(0, 2); wide transitions
    # keep the bump's own coefficients from dominating the decay fit
    return smooth_step((r - 0.1) / 0.4) * (1.0 - smooth_step((r - 1.5) / 0.45))


def fourier_coefficients(x, t: float, N: float, x0, k_max: int, points: int = 256) -> dict:
    """Fourier coefficients of ``exp(i E_N(x, t; .)) chi(.)`` on the torus ``[-pi, pi)^d``.

    Normalised as ``alpha_k = (2 pi)^{-d} int exp(-i xi.k) g(xi) dxi`` so that
    ``g = sum_k alpha_k exp(i xi.k)``. Computed by the periodic trapezoid rule.
    """
    x = np.asarray(x, dtype=float)
    d = x.size
    if k_max > points // 4:
        raise ValueError("k_max beyond a quarter of the quadrature points: aliasing risk")
    h = 2 * np.pi / points
    ax = -np.pi + h * np.arange(points)
    mesh = np.meshgrid(*((ax,) * d), indexing="ij")
    pts = np.stack([m.ravel() for m in mesh], axis=1)
    r = np.sqrt(np.sum(pts * pts, 1))
    chi = _fourier_cutoff(r)
    live = chi > 0
    g = np.zeros(pts.shape[0], dtype=complex)
    E = rescaled_error(np.broadcast_to(x, (live.sum(), d)), t, pts[live], N, x0)
    g[live] = np.exp(1j * E) * chi[live]
    g = g.reshape((points,) * d)
    # alpha_k = (1/P^d) sum_j g_j exp(-i xi_j k), xi_j = -pi + j h
    coeffs = np.fft.fftn(g) / points ** d
    k = np.fft.fftfreq(points, d=1.0 / points).astype(int)
    phase = np.exp(1j * np.pi * k)
    for ax_i in range(d):
        shape = [1] * d
        shape[ax_i] = points
        coeffs = coeffs * phase.reshape(shape)
    return {"k": k, "alpha": coeffs, "g": g, "xi_axis": ax, "k_max": k_max}


def decay_exponent(alpha: np.ndarray, k: np.ndarray, k_min: int = 2, k_max: int | None = None,
                   floor: float = 1e-13) -> float:
    """Fitted ``s`` in ``|alpha_k| <~ (1 + |k|)^{-s}`` from dyadic-shell maxima above a noise floor."""
    d = alpha.ndim
    K = np.sqrt(sum(np.meshgrid(*((k.astype(float) ** 2,) * d), indexing="ij"))) if d > 1 else np.abs(k)
    a = np.abs(alpha)
    top = a.max()
    k_max = int(K.max()) if k_max is None else k_max
    xs, ys = [], []
    lo = k_min
    while lo < k_max:
        hi = min(2 * lo, k_max)
        sel = (K >= lo) & (K < hi)
        if sel.any():
            j = np.argmax(a[sel])
            v = a[sel][j]
            if v > floor * top:
                xs.append(np.log(1.0 + K[sel][j]))
                ys.append(np.log(v))
        lo = hi
    if len(xs) < 2:
        return float("inf")
    return float(-np.polyfit(xs, ys, 1)[0])


def majorant_v_star(x, t, xi, r: float, C: float, m: int) -> np.ndarray:
    """Majorant solution of the Cauchy-Kovalevskaya comparison system.

    ``v* = (A - sqrt(A^2 - 2 m (2n+1) C r t)) / (m (2n+1))`` with
    ``A = r - sum(x) - sum(xi)``. Every component of ``u* = v* (1, ..., 1)``
    solves ``d_t u = C r / (r - sum(x,xi) - sum(u)) * (sum_{j,l} d_j u^l + 1)``.
    """
    x = np.asarray(x, dtype=float)
    xi = np.asarray(xi, dtype=float)
    n = x.shape[-1]
    K = m * (2 * n + 1)
    A = r - np.sum(x, -1) - np.sum(xi, -1)
    disc = A * A - 2 * K * C * r * np.asarray(t, dtype=float)
    if np.any(disc < 0):
        raise ValueError("outside the majorant's domain (negative discriminant)")
    return (A - np.sqrt(disc)) / K


def majorant_breakdown_time(r: float, C: float, m: int, n: int) -> float:
    """First ``t`` at which the discriminant vanishes at ``x = xi = 0``."""
    K = m * (2 * n + 1)
    f = lambda t: r * r - 2 * K * C * r * t
    return brentq(f, 0.0, r * r / (K * C * r) + 1.0)
