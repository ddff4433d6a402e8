import numpy as np
import scipy.linalg

from models.errors import DimensionError, DomainError, SingularityError
from models.skew_matrix import SkewMatrix
from tools.pfaffian import pf


CONDITION_LIMIT = 1e12


def _finite(name: str, arr) -> np.ndarray:
    arr = np.asarray(arr, dtype=float)
    if arr.ndim != 2:
        raise DimensionError(f"{name} must be a matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} has NaN or Inf entries")
    return arr


def inverse_transpose(m: np.ndarray) -> np.ndarray:
    """M^{-T} by dense LU with partial pivoting, guarded by the condition number."""
    m = np.asarray(m, dtype=float)
    if m.size == 0:
        return m.copy()
    cond = np.linalg.cond(m)
    if not np.isfinite(cond) or cond > CONDITION_LIMIT:
        raise SingularityError(f"matrix is numerically singular (condition number {cond:.3e})")
    lu = scipy.linalg.lu_factor(m.T)
    return scipy.linalg.lu_solve(lu, np.eye(m.shape[0]))


def _rounded_skew(x: np.ndarray) -> SkewMatrix:
    # LU inverses are antisymmetric only up to rounding amplified by the condition number
    return SkewMatrix.from_array(x, atol=1e-8 * max(1.0, float(np.max(np.abs(x)))))


def check_det_commutation(a, b) -> tuple[float, float]:
    """
    Both sides of det(I_T - AB) = det(I_N - BA).

    Args:
        a: T×N matrix
        b: N×T matrix

    Returns:
        (lhs, rhs)
    """
    a, b = _finite("a", a), _finite("b", b)
    if a.shape != b.shape[::-1]:
        raise DimensionError(f"shapes {a.shape} and {b.shape} are not compatible")
    t, n = a.shape
    lhs = scipy.linalg.det(np.eye(t) - a @ b)
    rhs = scipy.linalg.det(np.eye(n) - b @ a)
    return float(lhs), float(rhs)


def check_rains(a, b: SkewMatrix, c: SkewMatrix) -> tuple[float, float]:
    """
    Both sides of the Pfaffian Cauchy–Binet identity

        Pf(C^{-T} - A B Aᵀ) / Pf(C^{-T}) = Pf(B^{-T} - Aᵀ C A) / Pf(B^{-T})

    with A of shape p×q, B q×q and C p×p antisymmetric. An A with an odd
    number of rows is padded with one zero row when C is one larger, the
    same bordering used to give odd-N matrices an even dimension.

    Raises:
        DimensionError: Incompatible shapes
        SingularityError: B or C numerically singular
    """
    a = _finite("a", a)
    b = b if isinstance(b, SkewMatrix) else SkewMatrix.from_array(b)
    c = c if isinstance(c, SkewMatrix) else SkewMatrix.from_array(c)
    if a.shape[0] % 2 and c.dim == a.shape[0] + 1:
        a = np.vstack([a, np.zeros((1, a.shape[1]))])
    if a.shape != (c.dim, b.dim):
        raise DimensionError(f"a has shape {a.shape}, expected ({c.dim}, {b.dim})")
    if b.dim % 2 or c.dim % 2:
        raise DimensionError(f"b and c need even dimensions, got {b.dim} and {c.dim}")

    b_it = inverse_transpose(b.entries)
    c_it = inverse_transpose(c.entries)
    lhs = pf(_rounded_skew(c_it - a @ b.entries @ a.T)) / pf(_rounded_skew(c_it))
    rhs = pf(_rounded_skew(b_it - a.T @ c.entries @ a)) / pf(_rounded_skew(b_it))
    return float(lhs), float(rhs)
