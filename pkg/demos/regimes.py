"""Klein-Gordon regimes: curvature of sqrt(|xi|^2 + m^2), Knapp boxes and the exponents they predict.

Run with ``python3 demos/regimes.py``. Prints a small table of the regime
split for N = 256 as the mass moves from the wave to the stationary side,
then measured Knapp ratios against the required exponent at p = 4.
"""
import numpy as np

from hermite_lab.bench.fitting import exponent_fit
from hermite_lab.knapp import curvature_spectrum, knapp_box, knapp_ratio, regime_of, required_exponent

N = 256.0
print(f"{'m':>8s} {'regime':>11s} {'radial':>10s} {'angular':>10s} {'box':>20s}")
for m in 2.0 ** np.arange(-2, 18, 2):
    c = curvature_spectrum(np.array([1.0, 0.0]), m)
    rad, ang = knapp_box(N, m / N)
    print(f"{m:8.3g} {regime_of(N, m):>11s} {c['radial']:10.3g} {c['angular']:10.3g} "
          f"{f'{rad:.3g} x {ang:.3g}':>20s}")

# m = N is elliptic; in d = 1 the packet only translates, so the ratio stays flat
Ns = [64.0, 128.0, 256.0, 512.0]
ratios = [knapp_ratio(n, 1.0, 4.0) for n in Ns]
fit = exponent_fit(Ns, ratios)
print(f"\nKnapp p=4, m=N: ratios {np.round(ratios, 5)}")
print(f"slope {fit.slope:.3f}  required {required_exponent(1, 4.0, 'elliptic'):.3f}")
