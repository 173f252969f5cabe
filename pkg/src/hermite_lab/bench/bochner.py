"""Growth of Hermite Bochner-Riesz means on focusing data (one dimension).

The test function is ``f = sign K_Lam(x0, .)`` with ``K_Lam`` the kernel of the
cutoff ``lambda < Lam`` and ``x0 = sqrt(Lam)`` the classical turning point,
where the eigenfunctions concentrate. Its Bochner-Riesz mean is evaluated
exactly in the truncated basis.
"""
from __future__ import annotations

import numpy as np

from ..spectral import HermiteBasis, bochner_riesz, hermite_functions
from .fitting import loglog_fit

__all__ = ["bochner_riesz_ratio", "bochner_riesz_growth", "focusing_data"]


def _basis(Lam: float) -> HermiteBasis:
    return HermiteBasis(1, int(np.ceil(Lam / 2)) + 2)


def focusing_data(Lam: float, basis: HermiteBasis | None = None, x0: float | None = None) -> np.ndarray:
    """``sign K_Lam(x0, x)`` on the basis grid; ``x0`` defaults to ``sqrt(Lam)``."""
    b = _basis(Lam) if basis is None else basis
    x0 = np.sqrt(Lam) if x0 is None else x0
    keep = b.eigenvalues() < Lam
    K = (hermite_functions(b.n_max, [x0])[:, 0] * keep) @ b.matrix
    return np.sign(K)


def bochner_riesz_ratio(Lam: float, ps, alpha: float = 0.0, x0: float | None = None) -> np.ndarray:
    """``||S^alpha_Lam f||_p / ||f||_p`` for the focusing data, one value per ``p``."""
    b = _basis(Lam)
    f = focusing_data(Lam, b, x0)
    c = b.analyze(b.sampled(f))
    g = b.synthesize(bochner_riesz(c, Lam, alpha)).values
    out = []
    for p in np.atleast_1d(ps):
        if np.isinf(p):
            out.append(np.abs(g).max() / np.abs(f).max())
        else:
            out.append((np.sum(np.abs(g) ** p) / np.sum(np.abs(f) ** p)) ** (1.0 / p))
    return np.asarray(out)


def bochner_riesz_growth(ps=(4.0, 16.0), Lams=None, alpha: float = 0.0) -> dict:
    """Fitted growth exponents of the ratio against ``log2 Lam``, one per ``p``.

    Slopes are per doubling of ``Lam``, i.e. the exponent ``s`` in ``Lam^s``.
    """
    Lams = [2.0 ** k for k in range(6, 13)] if Lams is None else list(Lams)
    R = np.array([bochner_riesz_ratio(L, ps, alpha) for L in Lams])
    fits = [loglog_fit(Lams, R[:, i]) for i in range(R.shape[1])]
    return {"Lam": np.asarray(Lams), "p": np.asarray(ps, dtype=float), "ratios": R,
            "slopes": np.array([f.slope for f in fits]), "residuals": np.array([f.residual for f in fits])}
