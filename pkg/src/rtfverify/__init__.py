"""Dual-path verification toolkit: ideal-monoid transforms, local spectral
weights, orbital integrals, unipotent period integrals and lattice sums, each
closed form paired with an independent oracle."""

from .formal import FormalLog
from .ideals import Ideal, Prime, QuadCharData

__all__ = ["FormalLog", "Ideal", "Prime", "QuadCharData"]
__version__ = "0.1.0"
