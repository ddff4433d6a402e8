"""The ε operator and the skew-symmetric form ⟨f|g⟩ for polynomial arguments.

Functions are passed by their polynomial factor (coefficients in ascending
order, or a numpy Polynomial); the measure supplies the weight, so ε acts on
the weighted function w·f. At a real point p

    εf(p) = ½ ∫ f(ξ) sgn(p - ξ) dν₁(ξ),

evaluated exactly through partial moments of the real weight, and at a
complex point p

    εf(p) = -i w(p̄) f(p̄) sgn(Im p).
"""

from typing import Sequence

import numpy as np
from numpy.polynomial import Polynomial
from numpy.polynomial.polynomial import polyval

from models.errors import ConsistencyError, DomainError
from models.measure import WeightedMeasure
from models.spectral import SpectralPoint


IMAG_RESIDUE = 1e-9


def coefficient_rows(polys: Sequence) -> np.ndarray:
    """Stack polynomials (Polynomial, coefficient sequence or scalar) into a (K, D) array."""
    rows = []
    for p in polys:
        coef = p.coef if isinstance(p, Polynomial) else np.atleast_1d(np.asarray(p, dtype=float))
        rows.append(np.asarray(coef, dtype=float))
    width = max(len(r) for r in rows)
    out = np.zeros((len(rows), width))
    for i, r in enumerate(rows):
        out[i, : len(r)] = r
    return out


def evaluate(coeffs: np.ndarray, points: np.ndarray) -> np.ndarray:
    """Values of each coefficient row at each point, shape (K, P)."""
    return polyval(np.asarray(points), np.asarray(coeffs).T, tensor=True)


def _point_array(points) -> np.ndarray:
    if isinstance(points, SpectralPoint):
        points = [points]
    values = [p.value if isinstance(p, SpectralPoint) else p for p in np.atleast_1d(points)]
    return np.asarray(values, dtype=complex)


def epsilon_values(coeffs: np.ndarray, points, m: WeightedMeasure) -> np.ndarray:
    """
    ε applied to each weighted polynomial row at each point.

    Args:
        coeffs: (K, D) ascending coefficients
        points: Complex array or SpectralPoints; zero imaginary part means real
        m: Measure supplying the weight

    Returns:
        Complex array of shape (K, P)

    Raises:
        DomainError: Complex points with a measure that has no complex weight
    """
    coeffs = np.atleast_2d(coeffs)
    z = _point_array(points)
    out = np.zeros((coeffs.shape[0], z.shape[0]), dtype=complex)
    real = z.imag == 0.0

    if np.any(real):
        degree = coeffs.shape[1] - 1
        moments = m.partial_moments(z.real[real], degree)
        half_total = 0.5 * m.total_moments(degree)
        out[:, real] = coeffs @ (moments - half_total[:, None])

    if np.any(~real):
        if not m.has_complex:
            raise DomainError(f"{m.kind.value} measure cannot evaluate ε off the real axis")
        zc = np.conj(z[~real])
        out[:, ~real] = -1j * evaluate(coeffs, zc) * m.complex_weight(zc) * np.sign(z[~real].imag)
    return out


def epsilon(f, p, m: WeightedMeasure) -> complex:
    return complex(epsilon_values(coefficient_rows([f]), p, m)[0, 0])


def skew_gram(coeffs: np.ndarray, m: WeightedMeasure) -> np.ndarray:
    """
    Matrix of ⟨f_j|f_k⟩ = ∫ (f_j εf_k - f_k εf_j) dν over the real line and,
    when the measure has one, the complex plane (both half-planes).

    Raises:
        ConsistencyError: The complex contribution has an imaginary residue
    """
    coeffs = np.atleast_2d(coeffs)
    rule = m.real_rule
    values = evaluate(coeffs, rule.nodes)
    eps = epsilon_values(coeffs, rule.nodes.astype(complex), m).real
    weighted = values * rule.weights
    gram = weighted @ eps.T - eps @ weighted.T

    if m.has_complex:
        crule = m.complex_rule
        beta = crule.nodes
        upper = evaluate(coeffs, beta) * crule.weights
        lower = evaluate(coeffs, np.conj(beta)) * crule.weights
        # εf_k(β) = -i f_k(β̄) above the axis and +i f_k(β) at β̄ below it
        above = -1j * (upper @ evaluate(coeffs, np.conj(beta)).T - evaluate(coeffs, np.conj(beta)) @ upper.T)
        below = 1j * (lower @ evaluate(coeffs, beta).T - evaluate(coeffs, beta) @ lower.T)
        plane = above + below
        residue = float(np.max(np.abs(plane.imag))) if plane.size else 0.0
        if residue > IMAG_RESIDUE * max(1.0, float(np.max(np.abs(plane.real)))):
            raise ConsistencyError(f"complex skew product has imaginary residue {residue:.3e}")
        gram = gram + plane.real
    return 0.5 * (gram - gram.T)


def skew_form(f, g, m: WeightedMeasure) -> float:
    return float(skew_gram(coefficient_rows([f, g]), m)[0, 1])


def border_integrals(coeffs: np.ndarray, m: WeightedMeasure) -> np.ndarray:
    """∫ f_j dν₁ for each row."""
    return m.real_rule.integrate(evaluate(np.atleast_2d(coeffs), m.real_rule.nodes))
