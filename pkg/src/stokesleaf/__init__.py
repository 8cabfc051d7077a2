"""Stokes matrices from shear coordinates, Goldman brackets and symplectic leaves."""

from .laurent import GaussianRational, LaurentScalar
from .surfaces import ShearPoint, StokesMatrix, SurfaceFamily, Word, stokes_matrix

__all__ = [
    "GaussianRational",
    "LaurentScalar",
    "ShearPoint",
    "StokesMatrix",
    "SurfaceFamily",
    "Word",
    "stokes_matrix",
]
__version__ = "0.1.0"
