"""Phase geometry of the Hermite Bochner-Riesz kernel and a Bourgain-condition test.

For ``x, y`` in the unit ball with ``D(x, y) = 1 + (x.y)^2 - |x|^2 - |y|^2 > 0``
the critical angles satisfy ``cos S_c = x.y + sqrt(D)`` and
``cos S_* = x.y - sqrt(D)`` (branch ``(0, pi)``), and the symmetric phase is

    Phi_H(x, y) = (S_c - cos(S_*) sin(S_c)) / 2.

With ``a = cos(S_c) x - y`` and ``b = x - cos(S_c) y`` the curvature matrix
has the closed form

    M = (a.b I - a b^T)(b a^T - a.b I) / (omega a.b),
    omega = sqrt((1 - |x|^2) D) sin(S_c)^4,

and ``Mt = (a.b) b a^T - (a.b)^2 I - (b.b) a a^T + (a.b) a b^T`` equals
``omega (a.b) M``. The Bourgain test freezes ``b`` along ``e_d`` and compares
the upper-left ``(d-1) x (d-1)`` block ``A`` of ``Mt`` with its derivative
``B`` along ``a`` in the first slot.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "PairPoint",
    "GeometryBundle",
    "hermitian_distance",
    "phase",
    "geometry",
    "rotation_to_last_axis",
    "curvature_matrix_oracle",
    "mixed_hessian",
    "bourgain_defect",
    "directional_derivative_identities",
    "sample_pair",
    "sample_generic_pair",
    "sample_parallel_pair",
    "GENERIC_MIN_SINE",
]

#: generic pairs keep the angle between a and b at least this far from 0 (sine)
GENERIC_MIN_SINE = 0.3

_RICHARDSON_H = 1e-4


def hermitian_distance(x, y):
    """``D(x, y) = 1 + (x.y)^2 - |x|^2 - |y|^2`` (complex-step safe)."""
    x = np.asarray(x)
    y = np.asarray(y)
    xy = x @ y
    return 1 + xy * xy - x @ x - y @ y


@dataclass(frozen=True)
class PairPoint:
    """A pair ``(x, y)`` in ``D(c0)``: ``|x|, |y| <= 1 - c0`` and ``D(x, y) > c0^2``."""

    x: np.ndarray
    y: np.ndarray
    c0: float = 0.1

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        y = np.asarray(self.y, dtype=float)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        if x.shape != y.shape or x.ndim != 1 or x.size < 2:
            raise ValueError("x and y must be vectors of the same dimension d >= 2")
        if not (0 < self.c0 < 1):
            raise ValueError("c0 must lie in (0, 1)")
        if not self.inside(x, y, self.c0):
            raise ValueError("pair outside the admissible domain D(c0)")

    @staticmethod
    def inside(x, y, c0: float) -> bool:
        lim = 1 - c0
        return bool(np.linalg.norm(x) <= lim and np.linalg.norm(y) <= lim
                    and hermitian_distance(x, y) > c0 * c0)

    @property
    def d(self) -> int:
        return self.x.size


def _angles(x, y):
    D = hermitian_distance(x, y)
    r = np.sqrt(D)
    xy = x @ y
    return D, xy + r, xy - r


def phase(x, y):
    """``Phi_H(x, y)``; accepts complex perturbations of real points."""
    x = np.asarray(x)
    y = np.asarray(y)
    _, cc, cs = _angles(x, y)
    sc = np.arccos(cc)
    return 0.5 * (sc - cs * np.sin(sc))


def _ab(x, y):
    _, cc, _ = _angles(x, y)
    return cc * x - y, x - cc * y


def _mt(x, y):
    a, b = _ab(x, y)
    ab = a @ b
    d = a.size
    return ab * np.outer(b, a) - ab * ab * np.eye(d) - (b @ b) * np.outer(a, a) + ab * np.outer(a, b)


@dataclass(frozen=True)
class GeometryBundle:
    D: float
    S_c: float
    S_star: float
    a: np.ndarray
    b: np.ndarray
    omega: float
    phi: float
    M: np.ndarray
    Mt: np.ndarray

    @property
    def ab(self) -> float:
        return float(self.a @ self.b)


def geometry(pt: PairPoint) -> GeometryBundle:
    """Closed-form geometry at an admissible pair."""
    x, y = pt.x, pt.y
    D, cc, cs = _angles(x, y)
    if not (-1 < cc < 1) or not (-1 < cs < 1) or 1 - cc < 1e-12:
        raise ValueError("degenerate critical angle (cos S_c or cos S_* at +-1)")
    sc, ss = float(np.arccos(cc)), float(np.arccos(cs))
    a, b = cc * x - y, x - cc * y
    ab = float(a @ b)
    if abs(ab) < 1e-12:
        raise ValueError("a.b vanishes: curvature matrix undefined")
    d = x.size
    omega = float(np.sqrt((1 - x @ x) * D) * np.sin(sc) ** 4)
    I = np.eye(d)
    M = (ab * I - np.outer(a, b)) @ (np.outer(b, a) - ab * I) / (omega * ab)
    phi = 0.5 * (sc - cs * np.sin(sc))
    return GeometryBundle(float(D), sc, ss, a, b, omega, float(phi), M, _mt(x, y))


def rotation_to_last_axis(v) -> np.ndarray:
    """Orthogonal (Householder) ``R`` with ``R v / |v| = e_d``."""
    v = np.asarray(v, dtype=float)
    d = v.size
    u = v / np.linalg.norm(v)
    e = np.zeros(d)
    e[-1] = 1.0
    w = u - e
    nw = np.linalg.norm(w)
    if nw < 1e-14:
        return np.eye(d)
    w /= nw
    return np.eye(d) - 2 * np.outer(w, w)


def _grad_x(x, y, step: float = 1e-30) -> np.ndarray:
    """``d_x Phi_H`` by the complex-step method (no cancellation)."""
    d = x.size
    g = np.empty(d)
    for i in range(d):
        xc = x.astype(complex)
        xc[i] += 1j * step
        g[i] = phase(xc, y).imag / step
    return g


def _hessian(f, z, h):
    d = z.size
    H = np.empty((d, d))
    for i in range(d):
        for j in range(i, d):
            ei = np.zeros(d)
            ej = np.zeros(d)
            ei[i] = h
            ej[j] = h
            H[i, j] = H[j, i] = (f(z + ei + ej) - f(z + ei - ej) - f(z - ei + ej) + f(z - ei - ej)) / (4 * h * h)
    return H


def curvature_matrix_oracle(pt: PairPoint, h: float = _RICHARDSON_H) -> np.ndarray:
    """Numerical ``d^2_zz <d_x Phi_H(x, z), a/|a|>`` at ``z = y``.

    The inner gradient is a complex-step derivative; the outer Hessian is a
    central difference with one Richardson level (steps ``h`` and ``2h``). The
    result is directly comparable with ``geometry(pt).M``: the closed form
    already carries the normalised ``a``.
    """
    if h <= 0 or 8 * h > 1 - max(np.linalg.norm(pt.x), np.linalg.norm(pt.y)):
        raise ValueError("step must be positive and well inside the unit ball")
    a, _ = _ab(pt.x, pt.y)
    u = a / np.linalg.norm(a)
    f = lambda z: _grad_x(pt.x, z) @ u
    H1 = _hessian(f, pt.y, h)
    H2 = _hessian(f, pt.y, 2 * h)
    return (4 * H1 - H2) / 3


def mixed_hessian(pt: PairPoint, h: float = _RICHARDSON_H) -> np.ndarray:
    """``[d_{x_i} d_{y_j} Phi_H]`` (complex step in ``x``, Richardson central differences in ``y``)."""
    d = pt.d
    out = np.empty((d, d))
    for j in range(d):
        e = np.zeros(d)
        e[j] = 1.0
        c1 = (_grad_x(pt.x, pt.y + h * e) - _grad_x(pt.x, pt.y - h * e)) / (2 * h)
        c2 = (_grad_x(pt.x, pt.y + 2 * h * e) - _grad_x(pt.x, pt.y - 2 * h * e)) / (4 * h)
        out[:, j] = (4 * c1 - c2) / 3
    return out


def _directional(f, x, v, h=_RICHARDSON_H):
    d1 = (f(x + h * v) - f(x - h * v)) / (2 * h)
    d2 = (f(x + 2 * h * v) - f(x - 2 * h * v)) / (4 * h)
    return (4 * d1 - d2) / 3


def _frozen_blocks(pt: PairPoint):
    """Rotate so that ``b`` points along ``e_d``; return ``A = Mt''``, ``B = d_a Mt''`` and the rotated pair."""
    a, b = _ab(pt.x, pt.y)
    R = rotation_to_last_axis(b)
    xr, yr = R @ pt.x, R @ pt.y
    ar, _ = _ab(xr, yr)
    k = pt.d - 1
    A = _mt(xr, yr)[:k, :k]
    B = _directional(lambda z: _mt(z, yr)[:k, :k], xr, ar)
    return A, B, xr, yr, ar


def bourgain_defect(x0, y0, c0: float = 0.1) -> float:
    """``min_c ||B - c A||_F / ||B||_F`` at the pair (zero iff ``B`` is a multiple of ``A``)."""
    pt = PairPoint(x0, y0, c0)
    geometry(pt)
    A, B, *_ = _frozen_blocks(pt)
    nb = np.linalg.norm(B)
    if nb < 1e-10:
        raise ValueError("derivative block vanishes: degenerate configuration")
    na = np.sum(A * A)
    c = np.sum(A * B) / na if na > 0 else 0.0
    return float(np.linalg.norm(B - c * A) / nb)


def directional_derivative_identities(y0, c0: float = 0.1) -> dict:
    """Residuals of the identities used at ``x0 = 0``.

    ``ab_identity``: ``a.b - sqrt(D)(1 - cos^2 S_c)``; ``dD``: ``d_a D(0, y0)``;
    ``dcos``: ``d_a cos S_c(0, y0) + |y0|^2``; ``dMt``: relative Frobenius
    residual of ``d_a Mt'' = lambda I`` with ``lambda = -2 d_a(a.b) (a.b)``.
    ``lambda`` and ``lambda / |y0|^4`` are returned as well.
    """
    y0 = np.asarray(y0, dtype=float)
    x0 = np.zeros_like(y0)
    pt = PairPoint(x0, y0, c0)
    g = geometry(pt)
    a = g.a
    D0, cc, _ = _angles(x0, y0)
    ab_res = abs(g.ab - np.sqrt(D0) * (1 - cc * cc))
    dD = _directional(lambda z: hermitian_distance(z, y0), x0, a)
    dcos = _directional(lambda z: _angles(z, y0)[1], x0, a)
    A, B, xr, yr, ar = _frozen_blocks(pt)
    abr = lambda z: _ab(z, yr)[0] @ _ab(z, yr)[1]
    lam = -2 * _directional(abr, xr, ar) * abr(xr)
    k = pt.d - 1
    dMt = np.linalg.norm(B - lam * np.eye(k)) / np.linalg.norm(B)
    yy = float(y0 @ y0)
    return {"ab_identity": float(ab_res), "dD": float(abs(dD)), "dcos": float(abs(dcos + yy)),
            "dcos_ratio": float(dcos / yy), "dMt": float(dMt), "lambda": float(lam),
            "lambda_over_y4": float(lam / yy ** 2), "B": B}


def sample_pair(d: int, c0: float, rng: np.random.Generator) -> tuple:
    """Uniform (rejection) sample of ``D(c0)``."""
    lim = 1 - c0
    while True:
        x = rng.uniform(-lim, lim, d)
        y = rng.uniform(-lim, lim, d)
        if PairPoint.inside(x, y, c0):
            return x, y


def sample_generic_pair(d: int, c0: float, rng: np.random.Generator,
                        min_sine: float = GENERIC_MIN_SINE) -> tuple:
    """Sample of ``D(c0)`` with ``sin angle(a, b) >= min_sine``, away from the parallel set."""
    while True:
        x, y = sample_pair(d, c0, rng)
        a, b = _ab(x, y)
        cos = a @ b / (np.linalg.norm(a) * np.linalg.norm(b))
        if np.sqrt(max(0.0, 1 - cos * cos)) >= min_sine and 1 - (x @ y + np.sqrt(hermitian_distance(x, y))) > 1e-6:
            return x, y


def sample_parallel_pair(d: int, c0: float, rng: np.random.Generator) -> tuple:
    """``(c y0, y0)`` in ``D(c0)`` with ``c`` uniform in ``[-0.9, 0.9]``, ``c`` away from 1."""
    while True:
        y = rng.uniform(-(1 - c0), 1 - c0, d)
        c = rng.uniform(-0.9, 0.9)
        x = c * y
        if np.linalg.norm(y) > 0.1 and PairPoint.inside(x, y, c0):
            return x, y
