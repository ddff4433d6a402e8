from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, Sequence

import numpy as np

from models.errors import DomainError, ConsistencyError


class PointTag(str, Enum):
    REAL = "real"
    COMPLEX_PAIR = "complex-pair"


@dataclass(frozen=True)
class SpectralPoint:
    """A real eigenvalue, or the upper-half-plane member of a conjugate pair."""

    tag: PointTag
    value: complex

    def __post_init__(self):
        value = complex(self.value)
        if not (np.isfinite(value.real) and np.isfinite(value.imag)):
            raise DomainError(f"spectral point must be finite, got {value}")
        if self.tag is PointTag.REAL:
            if value.imag != 0.0:
                raise DomainError(f"real point has imaginary part {value.imag}")
        elif value.imag <= 0.0:
            raise DomainError(f"complex-pair representative needs Im > 0, got {value}")
        object.__setattr__(self, "value", value)

    @classmethod
    def real(cls, x: float) -> "SpectralPoint":
        return cls(PointTag.REAL, complex(float(x), 0.0))

    @classmethod
    def pair(cls, z: complex) -> "SpectralPoint":
        """Pair representative; a value below the axis is replaced by its conjugate."""
        z = complex(z)
        if z.imag < 0:
            z = z.conjugate()
        return cls(PointTag.COMPLEX_PAIR, z)

    @property
    def is_real(self) -> bool:
        return self.tag is PointTag.REAL


def as_points(values: Sequence) -> list[SpectralPoint]:
    """Coerce numbers or SpectralPoints: reals become real points, the rest pair representatives."""
    points = []
    for v in values:
        if isinstance(v, SpectralPoint):
            points.append(v)
        elif complex(v).imag == 0.0:
            points.append(SpectralPoint.real(complex(v).real))
        else:
            points.append(SpectralPoint.pair(v))
    return points


@dataclass(frozen=True)
class SpectralSample:
    reals: tuple[float, ...]
    pairs: tuple[complex, ...] = ()

    def __post_init__(self):
        if any(p.imag <= 0 for p in self.pairs):
            raise DomainError("pair representatives must have Im > 0")
        object.__setattr__(self, "reals", tuple(sorted(float(x) for x in self.reals)))
        object.__setattr__(self, "pairs", tuple(complex(p) for p in self.pairs))

    @property
    def n(self) -> int:
        return len(self.reals) + 2 * len(self.pairs)


@dataclass
class SpectralBatch:
    """
    Many samples of one ensemble stored as NaN-padded arrays.

    reals has shape (count, n) with real eigenvalues sorted ascending and NaN
    padding; pairs has shape (count, n // 2) with NaN padding.
    """

    n: int
    reals: np.ndarray
    pairs: np.ndarray
    seed: int | None = None
    ensemble: str = field(default="")

    def __post_init__(self):
        if self.reals.shape[0] != self.pairs.shape[0]:
            raise ConsistencyError("reals and pairs disagree on sample count")
        counts = self.real_counts + 2 * self.pair_counts
        if np.any(counts != self.n):
            raise ConsistencyError(f"samples do not all carry {self.n} eigenvalues")

    @property
    def count(self) -> int:
        return self.reals.shape[0]

    @property
    def real_counts(self) -> np.ndarray:
        return np.sum(~np.isnan(self.reals), axis=1)

    @property
    def pair_counts(self) -> np.ndarray:
        return np.sum(~np.isnan(self.pairs.real), axis=1)

    def samples(self) -> Iterator[SpectralSample]:
        for row_r, row_p in zip(self.reals, self.pairs):
            yield SpectralSample(
                reals=tuple(row_r[~np.isnan(row_r)]),
                pairs=tuple(row_p[~np.isnan(row_p.real)]),
            )

    @classmethod
    def from_samples(cls, samples: Sequence[SpectralSample], ensemble: str = "") -> "SpectralBatch":
        if not samples:
            raise DomainError("need at least one sample")
        n = samples[0].n
        if any(s.n != n for s in samples):
            raise ConsistencyError(f"samples do not all carry {n} eigenvalues")
        reals = np.full((len(samples), n), np.nan)
        pairs = np.full((len(samples), max(n // 2, 0)), np.nan + 0j, dtype=complex)
        for i, s in enumerate(samples):
            reals[i, : len(s.reals)] = s.reals
            pairs[i, : len(s.pairs)] = s.pairs
        return cls(n=n, reals=reals, pairs=pairs, ensemble=ensemble)
