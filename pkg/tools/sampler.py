"""
Eigenvalue sampling for the real symmetric (GOE) and real Ginibre ensembles.

Random numbers come from numpy's PCG64 bit generator seeded through
SeedSequence(seed). Independent chunk streams are SeedSequence(seed).spawn(k),
so chunk i always sees the same stream whatever the worker count. Normals are
produced by the Box–Muller transform from pairs of uniform doubles
(u1 in (0, 1], u2 in [0, 1)): r = sqrt(-2 log u1), θ = 2π u2, emitting
r cos θ then r sin θ. Matrices are filled row-major from that stream.
"""

import math

import numpy as np
from scipy.special import beta, hyp2f1

from models.errors import ConfigurationError, NumericError
from models.spectral import SpectralBatch, SpectralSample
from utils.logger import get_logger


logger = get_logger(__name__)

REAL_THRESHOLD = 1e-9
GOE = "hermitian-beta1"
GINIBRE = "real-asymmetric"
ENSEMBLES = (GOE, GINIBRE)


class SeededStream:
    """PCG64 stream with Box–Muller normals."""

    def __init__(self, seed):
        self.sequence = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
        self._generator = np.random.Generator(np.random.PCG64(self.sequence))

    def spawn(self, count: int) -> list["SeededStream"]:
        return [SeededStream(child) for child in self.sequence.spawn(count)]

    def uniform(self, size) -> np.ndarray:
        return self._generator.random(size)

    def normal(self, shape) -> np.ndarray:
        shape = tuple(np.atleast_1d(shape))
        total = int(np.prod(shape))
        half = (total + 1) // 2
        u1 = 1.0 - self.uniform(half)
        u2 = self.uniform(half)
        radius = np.sqrt(-2.0 * np.log(u1))
        theta = 2.0 * np.pi * u2
        values = np.column_stack([radius * np.cos(theta), radius * np.sin(theta)]).ravel()
        return values[:total].reshape(shape)


def _check_n(n: int) -> int:
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise ConfigurationError(f"n must be a positive integer, got {n!r}")
    return int(n)


def _seed_of(stream: SeededStream):
    return stream.sequence.entropy


def goe_matrices(stream: SeededStream, count: int, n: int) -> np.ndarray:
    """(G + Gᵀ)/2 for count matrices G of standard normals."""
    g = stream.normal((count, n, n))
    return 0.5 * (g + np.swapaxes(g, -1, -2))


def goe_batch(stream: SeededStream, count: int, n: int) -> SpectralBatch:
    try:
        reals = np.linalg.eigvalsh(goe_matrices(stream, count, n))
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"symmetric eigensolver failed: {exc}", seed=_seed_of(stream)) from exc
    pairs = np.full((count, n // 2), np.nan + 0j, dtype=complex)
    return SpectralBatch(n=n, reals=reals, pairs=pairs, ensemble=GOE)


def _is_real(eigenvalues: np.ndarray) -> np.ndarray:
    return np.abs(eigenvalues.imag) <= REAL_THRESHOLD * (1.0 + np.abs(eigenvalues))


def ginibre_batch(stream: SeededStream, count: int, n: int) -> SpectralBatch:
    """
    Eigenvalues of count real Ginibre matrices, split into sorted reals and
    upper-half-plane representatives ordered by real part.

    Raises:
        NumericError: Eigensolver failure or unpaired complex eigenvalues
    """
    g = stream.normal((count, n, n))
    try:
        eig = np.linalg.eigvals(g)
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"eigensolver failed: {exc}", seed=_seed_of(stream)) from exc

    real_mask = _is_real(eig)
    upper = ~real_mask & (eig.imag > 0)
    lower = ~real_mask & (eig.imag < 0)
    if np.any(upper.sum(axis=1) != lower.sum(axis=1)):
        raise NumericError("complex eigenvalues do not come in conjugate pairs", seed=_seed_of(stream))

    reals = np.sort(np.where(real_mask, eig.real, np.nan), axis=1)
    order = np.argsort(np.where(upper, eig.real, np.inf), axis=1, kind="stable")
    ranked = np.take_along_axis(np.where(upper, eig, np.nan + 0j), order, axis=1)
    pairs = ranked[:, : n // 2]
    return SpectralBatch(n=n, reals=reals, pairs=pairs, ensemble=GINIBRE)


def classify(eigenvalues, seed=None) -> SpectralSample:
    """
    Split one spectrum into real eigenvalues and conjugate pairs.

    A value is real when |Im λ| <= 1e-9 (1 + |λ|). Each remaining value above
    the axis is matched greedily with the nearest conjugate of an unmatched
    value below it.

    Raises:
        NumericError: An eigenvalue is left without a partner
    """
    eig = np.asarray(eigenvalues, dtype=complex)
    real_mask = _is_real(eig)
    reals = eig[real_mask].real
    above = [z for z in eig[~real_mask] if z.imag > 0]
    below = [z for z in eig[~real_mask] if z.imag < 0]
    if len(above) != len(below):
        raise NumericError(f"{len(above)} eigenvalues above the axis but {len(below)} below", seed=seed)
    pairs = []
    for z in sorted(above, key=lambda v: (v.real, v.imag)):
        k = int(np.argmin([abs(z - w.conjugate()) for w in below]))
        partner = below.pop(k)
        pairs.append(complex(0.5 * (z.real + partner.real), 0.5 * (z.imag - partner.imag)))
    return SpectralSample(reals=tuple(reals), pairs=tuple(pairs))


def sample_goe(n: int, seed) -> SpectralSample:
    n = _check_n(n)
    stream = SeededStream(seed)
    return next(goe_batch(stream, 1, n).samples())


def sample_ginibre_real(n: int, seed) -> SpectralSample:
    """
    Raises:
        NumericError: The eigensolver fails; the message carries the seed
    """
    n = _check_n(n)
    stream = SeededStream(seed)
    g = stream.normal((n, n))
    try:
        eig = np.linalg.eigvals(g)
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"eigensolver failed: {exc}", seed=seed) from exc
    return classify(eig, seed=seed)


def expected_real_count(n: int) -> float:
    """E[number of real eigenvalues] of an n×n real Ginibre matrix."""
    n = _check_n(n)
    return 0.5 + math.sqrt(2.0) * float(hyp2f1(1.0, -0.5, n, 0.5)) / float(beta(n, 0.5))
