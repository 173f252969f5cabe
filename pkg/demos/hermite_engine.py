"""Hermite engine tour: basis accuracy, the half-wave propagator and the lens cross-check.

Run with ``python3 demos/hermite_engine.py``.
"""
import numpy as np

from hermite_lab import SpectralField
from hermite_lab.bench.smoothing import coherent_state
from hermite_lab.spectral import invariant_residuals, lens_check, propagate

rng = np.random.default_rng(0)

res = invariant_residuals(200, 1, 100, rng)
for key in ("orthonormality", "eigen_relation", "unitarity", "group_law"):
    value = res[key]
    print(f"{key:>16s}  {value:.2e}")

# a coherent state at (x0, xi0) = (3, 10) circulates in phase space under exp(-it sqrt(H))
c = coherent_state(400, 3.0, 10.0)
for t in (0.0, 0.25, 0.5):
    u = propagate(c, t)
    print(f"t={t:4.2f}  |u|={u.norm():.12f}")

# exp(-itH) agrees with the lens-transformed free flow for |t| < pi/4
u0 = SpectralField(rng.normal(size=33) + 1j * rng.normal(size=33))
for t in (np.pi / 32, np.pi / 16, np.pi / 8 - 0.05):
    print(f"lens t={t:.4f}  relative L2 discrepancy {lens_check(u0, t)['residual_l2']:.2e}")
