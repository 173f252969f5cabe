"""Numerical laboratory for smoothing estimates of Hermite and Klein-Gordon propagators."""
from .fields import SampledField, SpectralField

__version__ = "0.1.0"
__all__ = ["SampledField", "SpectralField", "__version__"]
