"""Exact lattice computations for Seiberg-Witten basic classes of surfaces."""

from .basic_classes import BasicClassSet, SpincBasicClass, enumerate_basic_classes
from .lattice import LatticeError, LatticeSpace
from .surfaces import SurfaceModel, UnsupportedModel, build

__version__ = "0.1.0"

__all__ = [
    "BasicClassSet",
    "LatticeError",
    "LatticeSpace",
    "SpincBasicClass",
    "SurfaceModel",
    "UnsupportedModel",
    "build",
    "enumerate_basic_classes",
]
