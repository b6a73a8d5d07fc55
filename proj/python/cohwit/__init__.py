"""Coherence witnesses for block and POVM measurements, and quantum Fisher
information for phase estimation with degenerate Hamiltonians."""

from ._core import *  # noqa: F401,F403
from ._core import (
    CohwitError,
    DegeneracyAmbiguous,
    DimensionError,
    FormatError,
    InvalidDimension,
    InvalidMeasurement,
    InvalidOperator,
    InvalidParameter,
    InvalidState,
    UncertifiedWitness,
)

__version__ = "0.1.0"
