"""Plain data containers shared by the spectral and Fourier layers."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = ["SpectralField", "SampledField"]


@dataclass(frozen=True)
class SpectralField:
    """Hermite coefficients indexed by multi-index ``n`` (one array axis per dimension).

    ``coeffs[n1]`` for ``d = 1`` and ``coeffs[n1, n2]`` for ``d = 2``.
    """

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        if c.ndim not in (1, 2):
            raise ValueError("SpectralField supports d = 1 or d = 2")
        if len(set(c.shape)) != 1:
            raise ValueError("coefficient array must be square (same n_max per axis)")
        object.__setattr__(self, "coeffs", c)

    @property
    def d(self) -> int:
        return self.coeffs.ndim

    @property
    def n_max(self) -> int:
        return self.coeffs.shape[0] - 1

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.coeffs) ** 2)))

    def with_coeffs(self, coeffs: np.ndarray) -> "SpectralField":
        return SpectralField(coeffs)


@dataclass(frozen=True)
class SampledField:
    """Complex samples on a uniform tensor grid.

    ``axes`` holds one 1-D coordinate array per spatial dimension. When
    ``times`` is given the first array axis of ``values`` runs over time.
    """

    axes: tuple
    values: np.ndarray
    times: np.ndarray | None = None
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        axes = tuple(np.asarray(a, dtype=float) for a in self.axes)
        vals = np.asarray(self.values)
        expect = tuple(len(a) for a in axes)
        if self.times is not None:
            t = np.asarray(self.times, dtype=float)
            object.__setattr__(self, "times", t)
            expect = (len(t),) + expect
        if vals.shape != expect:
            raise ValueError(f"values shape {vals.shape} does not match grid {expect}")
        object.__setattr__(self, "axes", axes)
        object.__setattr__(self, "values", vals)

    @property
    def d(self) -> int:
        return len(self.axes)

    @property
    def spacing(self) -> tuple:
        return tuple(float(a[1] - a[0]) if len(a) > 1 else 1.0 for a in self.axes)

    def cell_volume(self) -> float:
        return float(np.prod(self.spacing))
