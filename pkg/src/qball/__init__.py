"""Harmonic analysis on the quantum unit ball: q-special functions, the radial
q-Laplacian, the q-spherical transform, Bergman-space symbol calculus and the
q-Berezin transform."""

from .bergman import WeightParam
from .lattice import MultiRadialFunction, RadialFunction
from .qcore import AccuracyError, AccuracyWarning, DomainError, QContext
from .spherical import SpectralFunction

__version__ = "0.1.0"

__all__ = [
    "QContext",
    "WeightParam",
    "RadialFunction",
    "MultiRadialFunction",
    "SpectralFunction",
    "DomainError",
    "AccuracyError",
    "AccuracyWarning",
]
