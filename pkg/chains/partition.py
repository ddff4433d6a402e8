import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from numpy.polynomial import Polynomial

from config import get_settings
from models.errors import ConfigurationError, SizeError, UnsupportedError
from models.measure import MeasureKind, WeightedMeasure
from models.skew_matrix import SkewMatrix
from tools.epsilon import border_integrals, coefficient_rows, skew_gram
from tools.pfaffian import pf
from tools.utils.quadrature import ordered_rule
from utils.logger import get_logger


logger = get_logger(__name__)

BRUTEFORCE_MAX_N = 3


@dataclass(frozen=True, eq=False)
class MomentMatrices:
    """Skew moment matrix u, border integrals and the bordered odd-N matrix w."""

    u: SkewMatrix
    border: np.ndarray
    w: SkewMatrix
    kind: MeasureKind

    @property
    def n(self) -> int:
        return self.u.dim


def monomial_basis(n: int) -> np.ndarray:
    return np.eye(n)


def shifted_basis(n: int, shift: float) -> np.ndarray:
    """Monic (x - shift)^k for k < n, as coefficient rows."""
    return coefficient_rows([Polynomial([-shift, 1.0]) ** k for k in range(n)])


def check_odd(n: int) -> int:
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise ConfigurationError(f"n must be a positive integer, got {n!r}")
    if n % 2 == 0:
        raise UnsupportedError(f"only odd n is supported, got {n}")
    return int(n)


def monic_rows(basis, n: int) -> np.ndarray:
    """Validate that basis row k is monic of degree k and return the first n rows."""
    coeffs = basis if isinstance(basis, np.ndarray) and basis.ndim == 2 else coefficient_rows(basis)
    if coeffs.shape[0] < n:
        raise ConfigurationError(f"basis has {coeffs.shape[0]} polynomials, need {n}")
    coeffs = np.array(coeffs[:n], dtype=float)
    if coeffs.shape[1] < n:
        coeffs = np.hstack([coeffs, np.zeros((n, n - coeffs.shape[1]))])
    for k, row in enumerate(coeffs):
        if row[k] != 1.0 or np.any(row[k + 1:] != 0.0):
            raise ConfigurationError(f"basis polynomial {k} is not monic of degree {k}")
    return coeffs


def bordered(u: np.ndarray, border: np.ndarray) -> np.ndarray:
    n = u.shape[0]
    w = np.zeros((n + 1, n + 1))
    w[:n, :n] = u
    w[:n, n] = border
    w[n, :n] = -border
    return w


def build_moment_matrices(m: WeightedMeasure, basis, n: int) -> MomentMatrices:
    """
    Assemble u[j][k] = ⟨p_j|p_k⟩, the border ∫ p_j dν₁ and the bordered w.

    Args:
        m: Weighted measure
        basis: Monic polynomials with deg p_k = k (at least n of them)
        n: Odd matrix size

    Returns:
        MomentMatrices

    Raises:
        UnsupportedError: Even n
    """
    n = check_odd(n)
    coeffs = monic_rows(basis, n)
    u = skew_gram(coeffs, m)
    border = border_integrals(coeffs, m)
    logger.debug("moment matrices kind=%s n=%d max|u|=%.3e", m.kind.value, n, np.max(np.abs(u)))
    return MomentMatrices(
        u=SkewMatrix.from_array(u),
        border=border,
        w=SkewMatrix.from_array(bordered(u, border)),
        kind=m.kind,
    )


def normalization(kind: MeasureKind, n: int) -> float:
    """
    Factor turning pf(w) into the partition function.

    The ε orientation makes pf(w) = (-1)^{(n-1)/2} times the integral over
    the ordered domain. Real-symmetric ensembles report the integral over all
    of ℝ^n (n! times the ordered one); the real asymmetric ensemble reports
    the sector sum as is.
    """
    sign = -1.0 if (n - 1) // 2 % 2 else 1.0
    if MeasureKind(kind) is MeasureKind.REAL_ASYMMETRIC:
        return sign
    return sign * math.factorial(n)


def z_pfaffian(mm: MomentMatrices) -> float:
    return normalization(mm.kind, mm.n) * pf(mm.w)


def vandermonde_abs(points: np.ndarray) -> np.ndarray:
    """∏_{i<j} |x_j - x_i| along the last axis."""
    out = np.ones(points.shape[:-1])
    size = points.shape[-1]
    for i in range(size):
        for j in range(i + 1, size):
            out = out * np.abs(points[..., j] - points[..., i])
    return out


def sector_integral(
    m: WeightedMeasure,
    free_real: int,
    free_pairs: int = 0,
    fixed_real: Sequence[float] = (),
    fixed_pairs: Sequence[complex] = (),
    nodes: Optional[int] = None,
) -> float:
    """
    ∫ |Δ(fixed ∨ α ∨ β ∨ β̄)| ∏w(α) ∏|w(β)|² over ordered real α and β in the upper half-plane.

    Fixed points enter the Vandermonde but carry no weight. Real coordinates
    are integrated on the ordered simplex with breakpoints at the fixed real
    points, so the integrand is smooth on every cell.

    Raises:
        SizeError: More than 3 free real coordinates or 1 free pair
    """
    if free_real > BRUTEFORCE_MAX_N or free_pairs > 1:
        raise SizeError(f"sector too large for brute force: {free_real} real, {free_pairs} pairs")
    if free_pairs and not m.has_complex:
        raise ConfigurationError(f"{m.kind.value} measure has no complex component")
    nodes = nodes or get_settings().bruteforce_nodes

    lo, hi = m.support
    pts, wts = ordered_rule(free_real, lo, hi, nodes, breakpoints=tuple(fixed_real) + m.breakpoints)
    if free_real:
        wts = wts * np.prod(m.real_weight(pts), axis=1)

    if free_pairs:
        beta = m.complex_rule.nodes[:, None]
        beta_w = m.complex_rule.weights
        pair_coords = np.concatenate([beta, np.conj(beta)], axis=1)
    else:
        pair_coords = np.zeros((1, 0), dtype=complex)
        beta_w = np.ones(1)

    fixed = np.concatenate([
        np.asarray(fixed_real, dtype=complex),
        np.asarray(fixed_pairs, dtype=complex),
        np.conj(np.asarray(fixed_pairs, dtype=complex)),
    ])
    p_count, q_count = pts.shape[0], pair_coords.shape[0]
    coords = np.concatenate([
        np.broadcast_to(fixed, (p_count, q_count, fixed.size)),
        np.broadcast_to(pts[:, None, :].astype(complex), (p_count, q_count, free_real)),
        np.broadcast_to(pair_coords[None, :, :], (p_count, q_count, pair_coords.shape[1])),
    ], axis=2)
    return float(wts @ vandermonde_abs(coords) @ beta_w)


def z_ordered(m: WeightedMeasure, n: int, nodes: Optional[int] = None) -> float:
    """Partition integral over ordered real coordinates (sector sum for real asymmetric)."""
    if n > BRUTEFORCE_MAX_N:
        raise SizeError(f"brute-force partition integrals support n <= {BRUTEFORCE_MAX_N}, got {n}")
    if m.kind is not MeasureKind.REAL_ASYMMETRIC:
        return sector_integral(m, n, 0, nodes=nodes)
    total = 0.0
    # 2^M from the pair density, 1/M! for unordered upper-half-plane pairs
    for pairs in range(n // 2 + 1):
        total += 2.0 ** pairs / math.factorial(pairs) * sector_integral(m, n - 2 * pairs, pairs, nodes=nodes)
    return total


def z_bruteforce(m: WeightedMeasure, n: int, nodes: Optional[int] = None) -> float:
    """
    Partition function by direct quadrature, in the same convention as z_pfaffian.

    Raises:
        SizeError: n > 3
    """
    if n < 1:
        raise ConfigurationError(f"n must be >= 1, got {n}")
    z = z_ordered(m, n, nodes)
    if m.kind is not MeasureKind.REAL_ASYMMETRIC:
        z *= math.factorial(n)
    logger.debug("brute-force partition kind=%s n=%d z=%.17g", m.kind.value, n, z)
    return z
