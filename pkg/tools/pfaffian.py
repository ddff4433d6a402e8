from itertools import combinations

import numpy as np

from models.errors import DimensionError, SizeError
from models.skew_matrix import SkewMatrix, standard_symplectic


ORACLE_MAX_DIM = 12
ZERO_PIVOT = 1e-14


def _as_skew(m) -> SkewMatrix:
    return m if isinstance(m, SkewMatrix) else SkewMatrix.from_array(m)


def pf(m: SkewMatrix) -> float:
    """
    Pfaffian by skew-symmetric Gaussian elimination with partial pivoting.

    Each step pivots the largest entry of column k below the diagonal into
    position k+1 (a simultaneous row/column swap, which flips the sign) and
    eliminates with a rank-2 update of the trailing block.

    Args:
        m: Antisymmetric matrix of even dimension

    Returns:
        The Pfaffian; 0.0 when a pivot column is numerically zero

    Raises:
        DimensionError: If the dimension is odd
    """
    m = _as_skew(m)
    n = m.dim
    if n % 2:
        raise DimensionError(f"Pfaffian needs an even dimension, got {n}")
    if n == 0:
        return 1.0

    a = np.array(m.entries, dtype=float)
    threshold = ZERO_PIVOT * m.scale
    result = 1.0
    for k in range(0, n - 1, 2):
        kp = k + 1 + int(np.argmax(np.abs(a[k + 1:, k])))
        if kp != k + 1:
            a[[k + 1, kp], k:] = a[[kp, k + 1], k:]
            a[k:, [k + 1, kp]] = a[k:, [kp, k + 1]]
            result = -result
        if abs(a[k + 1, k]) <= threshold:
            return 0.0
        result *= a[k, k + 1]
        if k + 2 < n:
            tau = a[k, k + 2:] / a[k, k + 1]
            col = a[k + 2:, k + 1].copy()
            a[k + 2:, k + 2:] += np.outer(tau, col) - np.outer(col, tau)
    return float(result)


def _pf_recursive(a: np.ndarray) -> float:
    n = a.shape[0]
    if n == 0:
        return 1.0
    total = 0.0
    rest = np.arange(1, n)
    for pos, j in enumerate(rest):
        if a[0, j] == 0.0:
            continue
        keep = np.delete(rest, pos)
        sign = 1.0 if pos % 2 == 0 else -1.0
        total += sign * a[0, j] * _pf_recursive(a[np.ix_(keep, keep)])
    return total


def pf_oracle(m: SkewMatrix) -> float:
    """Pfaffian as a signed sum over perfect matchings (first-row expansion)."""
    m = _as_skew(m)
    if m.dim % 2:
        raise DimensionError(f"Pfaffian needs an even dimension, got {m.dim}")
    if m.dim > ORACLE_MAX_DIM:
        raise SizeError(f"pf_oracle is limited to dim <= {ORACLE_MAX_DIM}, got {m.dim}")
    return float(_pf_recursive(np.asarray(m.entries)))


def pf_minor_expansion(j: SkewMatrix, k: SkewMatrix) -> float:
    """
    Pf(J + K) as 1 + the sum of Pfaffians of all 2×2-block principal minors of K.

    Args:
        j: Standard block form J of dimension 2T
        k: Antisymmetric matrix of the same dimension

    Returns:
        1 + Σ_{nonempty t_1 < ... < t_n} Pf(K restricted to blocks t_1..t_n)

    Raises:
        DimensionError: If the dimensions differ or j is not the standard form
    """
    j, k = _as_skew(j), _as_skew(k)
    if j.dim != k.dim or j.dim % 2:
        raise DimensionError(f"expected equal even dimensions, got {j.dim} and {k.dim}")
    blocks = j.dim // 2
    if not np.array_equal(j.entries, standard_symplectic(blocks).entries):
        raise DimensionError("first argument is not the standard block form J")

    total = 1.0
    for size in range(1, blocks + 1):
        for chosen in combinations(range(blocks), size):
            index = [i for t in chosen for i in (2 * t, 2 * t + 1)]
            total += pf(k.minor(index))
    return total
