"""Domain types for the Pfaffian kernel library."""

from models.errors import (
    PfKernelError,
    DimensionError,
    DomainError,
    SizeError,
    ConfigurationError,
    UnsupportedError,
    SingularityError,
    DegeneracyError,
    ConsistencyError,
    NumericError,
)
from models.skew_matrix import SkewMatrix, standard_symplectic
from models.spectral import PointTag, SpectralPoint, SpectralSample, SpectralBatch, as_points
from models.measure import MeasureKind, QuadratureRule, WeightedMeasure

__all__ = [
    "PfKernelError",
    "DimensionError",
    "DomainError",
    "SizeError",
    "ConfigurationError",
    "UnsupportedError",
    "SingularityError",
    "DegeneracyError",
    "ConsistencyError",
    "NumericError",
    "SkewMatrix",
    "standard_symplectic",
    "PointTag",
    "SpectralPoint",
    "SpectralSample",
    "SpectralBatch",
    "as_points",
    "MeasureKind",
    "QuadratureRule",
    "WeightedMeasure",
]
