from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional

import numpy as np

from models.errors import ConfigurationError, DomainError


class MeasureKind(str, Enum):
    HERMITIAN_BETA1 = "hermitian-beta1"
    REAL_ASYMMETRIC = "real-asymmetric"
    CUSTOM = "custom"

    @classmethod
    def parse(cls, value) -> "MeasureKind":
        try:
            return cls(value)
        except ValueError:
            allowed = ", ".join(k.value for k in cls)
            raise ConfigurationError(f"unsupported measure kind: {value!r}. Allowed: {allowed}") from None


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Nodes and positive weights; the weights already carry the reference density."""

    nodes: np.ndarray
    weights: np.ndarray
    exact_degree: int

    def __post_init__(self):
        nodes = np.asarray(self.nodes)
        weights = np.asarray(self.weights, dtype=float)
        if nodes.shape != weights.shape or nodes.ndim != 1:
            raise ConfigurationError("quadrature nodes and weights must be 1-d arrays of equal length")
        if np.any(weights <= 0) or not np.all(np.isfinite(weights)):
            raise ConfigurationError("quadrature weights must be finite and > 0")
        nodes.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)

    def __len__(self) -> int:
        return self.nodes.shape[0]

    def integrate(self, values: np.ndarray) -> np.ndarray:
        """Contract the last axis of values (evaluated at the nodes) with the weights."""
        return np.asarray(values) @ self.weights


@dataclass(frozen=True, eq=False)
class WeightedMeasure:
    """
    Weight functions plus quadrature for ν₁ (real line) and ν₂ (open upper half-plane).

    partial_moments(p, d) returns an array of shape (d + 1, len(p)) holding
    ∫_{-∞}^{p} x^k real_weight(x) dx for k = 0..d.
    """

    kind: MeasureKind
    real_weight: Callable[[np.ndarray], np.ndarray]
    real_rule: QuadratureRule
    partial_moments: Callable[[np.ndarray, int], np.ndarray]
    support: tuple[float, float]
    complex_weight: Optional[Callable[[np.ndarray], np.ndarray]] = None
    complex_rule: Optional[QuadratureRule] = None
    breakpoints: tuple[float, ...] = ()

    def __post_init__(self):
        if (self.complex_weight is None) != (self.complex_rule is None):
            raise ConfigurationError("complex weight and complex rule must be given together")
        if self.kind is MeasureKind.HERMITIAN_BETA1 and self.complex_weight is not None:
            raise ConfigurationError("hermitian-beta1 measures carry no complex weight")
        if self.kind is MeasureKind.REAL_ASYMMETRIC and self.complex_weight is None:
            raise ConfigurationError("real-asymmetric measures need a complex weight")

    @property
    def has_complex(self) -> bool:
        return self.complex_weight is not None

    def total_moments(self, degree: int) -> np.ndarray:
        return self.partial_moments(np.array([np.inf]), degree)[:, 0]

    def complex_density(self, z: np.ndarray) -> np.ndarray:
        """|w(z)|², the density of ν₂ against area measure."""
        if not self.has_complex:
            raise DomainError(f"{self.kind.value} measure has no complex component")
        return self.complex_weight(z) ** 2

    def weight_at(self, points: np.ndarray) -> np.ndarray:
        """Real weight on real points, complex weight on the rest."""
        points = np.asarray(points, dtype=complex)
        is_real = points.imag == 0.0
        out = np.zeros(points.shape)
        out[is_real] = self.real_weight(points.real[is_real])
        if np.any(~is_real):
            if not self.has_complex:
                raise DomainError(f"{self.kind.value} measure has no complex component")
            out[~is_real] = self.complex_weight(points[~is_real])
        return out
