import math
from typing import Optional, Sequence

import numpy as np

from models.errors import ConfigurationError, ConsistencyError, DomainError
from models.measure import MeasureKind, WeightedMeasure
from models.spectral import SpectralPoint, as_points
from tools.pfaffian import pf
from chains.kernel import _check_inverse, kernel_matrix, real_reduce
from chains.partition import sector_integral, z_ordered
from chains.skeworth import InverseMatrix, SkewOrthFamily
from utils.logger import get_logger


logger = get_logger(__name__)

NEGATIVITY = 1e-9


def _pfaffian_correlation(f: SkewOrthFamily, m: WeightedMeasure, points: list[SpectralPoint]) -> float:
    value = pf(real_reduce(kernel_matrix(f, m, points), points))
    if value < -NEGATIVITY * max(1.0, abs(value)):
        raise ConsistencyError(f"correlation function is negative ({value:.3e})")
    return value


def correlation_hermitian(
    f: SkewOrthFamily,
    c: InverseMatrix,
    m: WeightedMeasure,
    points: Sequence,
) -> float:
    """
    R_n(y_1, ..., y_n) as the Pfaffian of the 2n×2n matrix [K_N(y_j, y_k)].

    Raises:
        DomainError: A point is not real
        ConfigurationError: No points
    """
    _check_inverse(f, c)
    points = as_points(points)
    if not points:
        raise ConfigurationError("need at least one point")
    if not all(p.is_real for p in points):
        raise DomainError("real-symmetric correlations take real points only")
    return _pfaffian_correlation(f, m, points)


def correlation_asymmetric(
    f: SkewOrthFamily,
    c: InverseMatrix,
    m: WeightedMeasure,
    x: Sequence,
    z: Sequence,
) -> float:
    """
    R_{ℓ,m}(x; z) for ℓ real points and m conjugate pairs.

    Blocks are ordered with every real point before every pair, each group in
    input order. Pair representatives below the axis are replaced by their
    conjugates.
    """
    _check_inverse(f, c)
    reals = as_points(x)
    pairs = [p if isinstance(p, SpectralPoint) else SpectralPoint.pair(p) for p in z]
    if not all(p.is_real for p in reals):
        raise DomainError("x must hold real points")
    if any(p.is_real for p in pairs):
        raise DomainError("z must hold complex-pair points")
    if not reals and not pairs:
        raise ConfigurationError("need at least one point")
    if len(reals) + 2 * len(pairs) > f.n:
        raise ConfigurationError(f"l + 2m = {len(reals) + 2 * len(pairs)} exceeds N = {f.n}")
    return _pfaffian_correlation(f, m, reals + pairs)


def correlation_bruteforce(
    m: WeightedMeasure,
    n: int,
    x: Sequence[float] = (),
    z: Sequence[complex] = (),
    nodes: Optional[int] = None,
) -> float:
    """
    Correlation function by integrating the joint density over the other eigenvalues.

    Real-symmetric: ∏w(y) ∫_{ordered ξ} |Δ(y ∨ ξ)| ∏w(ξ) / Z. Real asymmetric:
    the sum over sectors (L, M) with L >= ℓ and M >= m of
    2^M ∏w(x) ∏|w(z)|² / (M - m)! ∫∫ |Δ| over the remaining ordered reals and
    upper-half-plane pairs, divided by the sector-sum Z.
    """
    xs = [float(v) for v in x]
    zs = [complex(v) if complex(v).imag > 0 else complex(v).conjugate() for v in z]
    if any(v.imag == 0 for v in zs):
        raise DomainError("pair points need a nonzero imaginary part")
    used = len(xs) + 2 * len(zs)
    if used == 0 or used > n:
        raise ConfigurationError(f"need 1 <= l + 2m <= N, got {used} with N = {n}")

    if zs and m.kind is not MeasureKind.REAL_ASYMMETRIC:
        raise DomainError(f"{m.kind.value} measures have no complex eigenvalues")

    z_total = z_ordered(m, n, nodes)
    prefactor = float(np.prod(m.real_weight(np.array(xs)))) if xs else 1.0
    if zs:
        prefactor *= float(np.prod(m.complex_density(np.array(zs))))

    if m.kind is not MeasureKind.REAL_ASYMMETRIC:
        return prefactor * sector_integral(m, n - len(xs), 0, fixed_real=xs, nodes=nodes) / z_total

    total = 0.0
    for pairs in range(len(zs), n // 2 + 1):
        free_real = n - 2 * pairs - len(xs)
        if free_real < 0:
            continue
        free_pairs = pairs - len(zs)
        total += (
            2.0 ** pairs / math.factorial(free_pairs)
            * sector_integral(m, free_real, free_pairs, fixed_real=xs, fixed_pairs=zs, nodes=nodes)
        )
    return prefactor * total / z_total
