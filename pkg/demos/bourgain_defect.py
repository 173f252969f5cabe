"""Where the Bourgain condition holds for the Hermite Bochner-Riesz phase, and where it fails.

Run with ``python3 demos/bourgain_defect.py``. Parallel pairs have zero
defect in every dimension; generic pairs in d = 3 are bounded away from
zero, while in d = 2 the frozen blocks are scalars and the defect vanishes.
"""
import numpy as np

from hermite_lab import bourgain as bg

rng = np.random.default_rng(1)
c0 = 0.1
for d in (2, 3):
    par = [bg.bourgain_defect(*bg.sample_parallel_pair(d, c0, rng), c0) for _ in range(20)]
    gen = [bg.bourgain_defect(*bg.sample_generic_pair(d, c0, rng), c0) for _ in range(100)]
    print(f"d={d}  parallel max {max(par):.2e}   generic min {min(gen):.3g}  median {np.median(gen):.3g}")

for r in (0.2, 0.4, 0.6):
    ids = bg.directional_derivative_identities(np.array([0.0, 0.0, r]), c0)
    print(f"|y0|={r}  lambda/|y0|^4 = {ids['lambda_over_y4']:.4f}")
