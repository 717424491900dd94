"""Discrete phase-space lattice operators, the Planck oscillator and a
lattice Klein-Gordon field with its Poincare generators."""

__version__ = "0.1.0"

from .errors import (
    BasisError,
    ConvergenceError,
    DimensionMismatchError,
    DomainError,
    MemoryBudgetError,
    PhasecellError,
    StabilityError,
)
from .lattice_ops import LatticeOperator, TruncatedBasis, WaveFunction
from .oscillator import FUNDAMENTAL, PhysicalConstants

__all__ = [
    "__version__",
    "BasisError",
    "ConvergenceError",
    "DimensionMismatchError",
    "DomainError",
    "FUNDAMENTAL",
    "LatticeOperator",
    "MemoryBudgetError",
    "PhasecellError",
    "PhysicalConstants",
    "StabilityError",
    "TruncatedBasis",
    "WaveFunction",
]
