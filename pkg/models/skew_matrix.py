from dataclasses import dataclass

import numpy as np

from models.errors import DimensionError, DomainError


@dataclass(frozen=True, eq=False)
class SkewMatrix:
    """Dense real antisymmetric matrix; the entries array is read-only."""

    entries: np.ndarray

    def __post_init__(self):
        arr = np.array(self.entries, dtype=float)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise DimensionError(f"expected a square matrix, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise DomainError("matrix has NaN or Inf entries")
        if arr.size and np.max(np.abs(arr + arr.T)) > 1e-12 * max(1.0, float(np.max(np.abs(arr)))):
            raise DomainError("matrix is not antisymmetric; use SkewMatrix.from_array to symmetrize")
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    @classmethod
    def from_array(cls, values, atol: float | None = None) -> "SkewMatrix":
        """
        Build a SkewMatrix from an almost antisymmetric array.

        Args:
            values: Square array-like of real numbers
            atol: Largest tolerated |M + Mᵀ| entry; defaults to 1e-12 times
                  max(1, max|M|)

        Returns:
            SkewMatrix holding (M - Mᵀ)/2

        Raises:
            DimensionError: If the array is not square
            DomainError: If entries are not finite or asymmetry exceeds atol
        """
        arr = np.array(values, dtype=float)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise DimensionError(f"expected a square matrix, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise DomainError("matrix has NaN or Inf entries")
        if arr.size == 0:
            return cls(arr)
        if atol is None:
            atol = 1e-12 * max(1.0, float(np.max(np.abs(arr))))
        asym = float(np.max(np.abs(arr + arr.T)))
        if asym > atol:
            raise DomainError(f"matrix is not antisymmetric: max |M + M^T| = {asym:.3e}")
        return cls(0.5 * (arr - arr.T))

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def scale(self) -> float:
        return float(np.max(np.abs(self.entries))) if self.entries.size else 0.0

    def __add__(self, other: "SkewMatrix") -> "SkewMatrix":
        if self.dim != other.dim:
            raise DimensionError(f"cannot add {self.dim}x{self.dim} and {other.dim}x{other.dim}")
        return SkewMatrix(self.entries + other.entries)

    def minor(self, index) -> "SkewMatrix":
        """Principal submatrix on the given rows/columns."""
        idx = np.asarray(index, dtype=int)
        return SkewMatrix(self.entries[np.ix_(idx, idx)])


def standard_symplectic(t: int) -> SkewMatrix:
    """Block diagonal J with t blocks [[0, 1], [-1, 0]]."""
    if t < 0:
        raise DimensionError(f"number of blocks must be >= 0, got {t}")
    j = np.zeros((2 * t, 2 * t))
    for k in range(t):
        j[2 * k, 2 * k + 1] = 1.0
        j[2 * k + 1, 2 * k] = -1.0
    return SkewMatrix(j)
