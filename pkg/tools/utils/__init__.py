"""Quadrature rules and tabulated weights."""

from tools.utils.quadrature import (
    gaussian_rule,
    composite_legendre_rule,
    half_plane_rule,
    ordered_rule,
)
from tools.utils.weight_table import WeightTable

__all__ = [
    "gaussian_rule",
    "composite_legendre_rule",
    "half_plane_rule",
    "ordered_rule",
    "WeightTable",
]
