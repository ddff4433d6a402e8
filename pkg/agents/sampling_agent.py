import sys
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from tqdm import tqdm

from config import get_settings
from models.errors import ConfigurationError, UnsupportedError
from models.measure import MeasureKind, WeightedMeasure
from models.spectral import SpectralBatch, SpectralSample
from tools.sampler import SeededStream, ginibre_batch, goe_batch
from tools.utils.quadrature import legendre_on
from chains.kernel import kernel_diagonal
from chains.skeworth import InverseMatrix, SkewOrthFamily
from utils.logger import get_logger


logger = get_logger(__name__)

MIN_SAMPLES = 10_000
BIN_NODES = 6
SIGMA_LIMIT = 3.0


def parse_range(spec: str) -> tuple[float, float, int]:
    """Parse lo:hi:k into (lo, hi, k)."""
    try:
        lo, hi, k = spec.split(":")
        return float(lo), float(hi), int(k)
    except ValueError:
        raise ConfigurationError(f"range must look like lo:hi:k, got {spec!r}") from None


@dataclass(frozen=True)
class Region:
    """Equal-width bins on [lo, hi], optionally crossed with bins on [im_lo, im_hi] in the upper half-plane."""

    lo: float
    hi: float
    bins: int
    im_lo: Optional[float] = None
    im_hi: Optional[float] = None
    im_bins: Optional[int] = None

    def __post_init__(self):
        if not (np.isfinite(self.lo) and np.isfinite(self.hi)) or self.hi <= self.lo or self.bins < 1:
            raise ConfigurationError(f"empty region [{self.lo}, {self.hi}] with {self.bins} bins")
        im = (self.im_lo, self.im_hi, self.im_bins)
        if any(v is not None for v in im):
            if any(v is None for v in im):
                raise ConfigurationError("imaginary bins need im_lo, im_hi and im_bins together")
            if self.im_hi <= self.im_lo or self.im_bins < 1:
                raise ConfigurationError(f"empty imaginary range [{self.im_lo}, {self.im_hi}]")
            if self.im_lo < 0:
                raise ConfigurationError("pair representatives live in the upper half-plane; im_lo must be >= 0")

    @classmethod
    def parse(cls, spec: str, im_spec: Optional[str] = None) -> "Region":
        lo, hi, k = parse_range(spec)
        if im_spec is None:
            return cls(lo, hi, k)
        im_lo, im_hi, im_k = parse_range(im_spec)
        return cls(lo, hi, k, im_lo, im_hi, im_k)

    @property
    def is_complex(self) -> bool:
        return self.im_bins is not None

    @property
    def width(self) -> float:
        return (self.hi - self.lo) / self.bins

    @property
    def height(self) -> float:
        return (self.im_hi - self.im_lo) / self.im_bins if self.is_complex else 1.0

    @property
    def cell_count(self) -> int:
        return self.bins * (self.im_bins or 1)

    def cells(self) -> tuple[np.ndarray, np.ndarray, Optional[np.ndarray], Optional[np.ndarray]]:
        """Lower/upper edges of every cell, real index major."""
        re_edges = np.linspace(self.lo, self.hi, self.bins + 1)
        if not self.is_complex:
            return re_edges[:-1], re_edges[1:], None, None
        im_edges = np.linspace(self.im_lo, self.im_hi, self.im_bins + 1)
        re_lo = np.repeat(re_edges[:-1], self.im_bins)
        re_hi = np.repeat(re_edges[1:], self.im_bins)
        im_lo = np.tile(im_edges[:-1], self.bins)
        im_hi = np.tile(im_edges[1:], self.bins)
        return re_lo, re_hi, im_lo, im_hi

    def index(self, values: np.ndarray) -> np.ndarray:
        """Flat cell index for each value, -1 outside the region."""
        ix = np.floor((values.real - self.lo) / self.width).astype(int)
        inside = (ix >= 0) & (ix < self.bins)
        if self.is_complex:
            iy = np.floor((values.imag - self.im_lo) / self.height).astype(int)
            inside &= (iy >= 0) & (iy < self.im_bins)
            ix = ix * self.im_bins + iy
        return np.where(inside, ix, -1)


@dataclass(frozen=True, eq=False)
class Histogram:
    """Points per sample per unit length (or area) in each cell, with standard errors."""

    bin_lo: np.ndarray
    bin_hi: np.ndarray
    density: np.ndarray
    stderr: np.ndarray
    samples: int
    im_lo: Optional[np.ndarray] = None
    im_hi: Optional[np.ndarray] = None


@dataclass(frozen=True, eq=False)
class Comparison:
    histogram: Histogram
    predicted: np.ndarray
    z_score: np.ndarray

    @property
    def within(self) -> float:
        """Fraction of cells whose histogram value is within 3 standard errors of the prediction."""
        return float(np.mean(np.abs(self.z_score) <= SIGMA_LIMIT))


class SamplingAgent:
    def __init__(self):
        settings = get_settings()
        self._chunk = settings.sample_chunk
        self._workers = settings.sample_workers

    def sample_batch(
        self,
        ensemble,
        n: int,
        count: int,
        seed: int,
        progress: Optional[bool] = None,
    ) -> SpectralBatch:
        """
        Draw count spectra in chunks of at most sample_chunk matrices.

        Chunk i uses the i-th child of SeedSequence(seed), and chunks are
        concatenated in index order, so the result does not depend on the
        number of workers.

        Args:
            ensemble: "hermitian-beta1" (GOE) or "real-asymmetric" (real Ginibre)
            n: Matrix size
            count: Number of matrices
            seed: Master seed
            progress: Show a tqdm bar (default: only when stderr is a terminal)

        Returns:
            SpectralBatch
        """
        kind = MeasureKind.parse(ensemble)
        if kind is MeasureKind.CUSTOM:
            raise UnsupportedError("no matrix ensemble samples a custom weight")
        if count < 1:
            raise ConfigurationError(f"count must be >= 1, got {count}")
        if n < 1:
            raise ConfigurationError(f"n must be >= 1, got {n}")
        draw = goe_batch if kind is MeasureKind.HERMITIAN_BETA1 else ginibre_batch

        sizes = [min(self._chunk, count - start) for start in range(0, count, self._chunk)]
        streams = SeededStream(seed).spawn(len(sizes))
        parts: list[Optional[SpectralBatch]] = [None] * len(sizes)
        if progress is None:
            progress = sys.stderr.isatty()

        with ThreadPoolExecutor(max_workers=self._workers) as pool:
            futures = {pool.submit(draw, stream, size, n): i for i, (stream, size) in enumerate(zip(streams, sizes))}
            for future in tqdm(as_completed(futures), total=len(futures), desc=f"sampling {kind.value}",
                               file=sys.stderr, disable=not progress):
                parts[futures[future]] = future.result()

        logger.info("sampled ensemble=%s n=%d count=%d chunks=%d seed=%s", kind.value, n, count, len(sizes), seed)
        return SpectralBatch(
            n=n,
            reals=np.concatenate([p.reals for p in parts]),
            pairs=np.concatenate([p.pairs for p in parts]),
            seed=seed,
            ensemble=kind.value,
        )

    def density_estimate(
        self,
        batch: SpectralBatch | Sequence[SpectralSample],
        region: Region,
        target: str = "real",
    ) -> Histogram:
        """
        Histogram of real eigenvalues (target "real") or of pair
        representatives (target "complex", needs imaginary bins).

        Args:
            batch: A SpectralBatch, or individual samples of one size
            region: Bins
            target: "real" or "complex"

        Raises:
            ConfigurationError: Fewer than 10⁴ samples, or target and region disagree
        """
        if not isinstance(batch, SpectralBatch):
            batch = SpectralBatch.from_samples(list(batch))
        if batch.count < MIN_SAMPLES:
            raise ConfigurationError(f"density estimates need >= {MIN_SAMPLES} samples, got {batch.count}")
        if target not in ("real", "complex"):
            raise ConfigurationError(f"target must be 'real' or 'complex', got {target!r}")
        if (target == "complex") != region.is_complex:
            raise ConfigurationError(f"target {target!r} does not match a {'2-d' if region.is_complex else '1-d'} region")

        values = batch.reals if target == "real" else batch.pairs
        cells = region.cell_count
        sample_index = np.broadcast_to(np.arange(batch.count)[:, None], values.shape)
        present = ~np.isnan(values.real)
        cell = region.index(np.where(present, values, region.lo - 1.0))
        hit = cell >= 0

        # per-sample counts in each cell, reduced to first and second moments
        keys, counts = np.unique(sample_index[hit] * cells + cell[hit], return_counts=True)
        per_cell = keys % cells
        sums = np.bincount(per_cell, weights=counts, minlength=cells)
        squares = np.bincount(per_cell, weights=counts.astype(float) ** 2, minlength=cells)

        total = batch.count
        mean = sums / total
        variance = np.maximum(squares / total - mean ** 2, 0.0) * total / (total - 1)
        measure = region.width * region.height
        re_lo, re_hi, im_lo, im_hi = region.cells()
        return Histogram(
            bin_lo=re_lo,
            bin_hi=re_hi,
            density=mean / measure,
            stderr=np.sqrt(variance / total) / measure,
            samples=total,
            im_lo=im_lo,
            im_hi=im_hi,
        )

    def compare(
        self,
        batch: SpectralBatch,
        region: Region,
        f: SkewOrthFamily,
        c: InverseMatrix,
        m: WeightedMeasure,
        target: str = "real",
        nodes: int = BIN_NODES,
    ) -> Comparison:
        """Histogram next to the cell average of the one-point function S_N(y, y)."""
        histogram = self.density_estimate(batch, region, target)
        predicted = bin_average(f, c, m, region, nodes)
        gap = histogram.density - predicted
        z_score = np.divide(
            gap, histogram.stderr,
            out=np.where(np.abs(gap) <= 1e-12, 0.0, np.inf),
            where=histogram.stderr > 0,
        )
        comparison = Comparison(histogram=histogram, predicted=predicted, z_score=z_score)
        logger.info("compare cells=%d within_3sigma=%.4f", region.cell_count, comparison.within)
        return comparison


def bin_average(
    f: SkewOrthFamily,
    c: InverseMatrix,
    m: WeightedMeasure,
    region: Region,
    nodes: int = BIN_NODES,
) -> np.ndarray:
    """Gauss–Legendre cell averages of kernel_diagonal over every cell of the region."""
    re_lo, re_hi, im_lo, im_hi = region.cells()
    xs, wx = legendre_on(re_lo, re_hi, nodes)
    if not region.is_complex:
        values = kernel_diagonal(f, c, m, xs.ravel()).reshape(xs.shape)
        return (values * wx).sum(axis=1) / region.width
    ys, wy = legendre_on(im_lo, im_hi, nodes)
    points = xs[:, :, None] + 1j * ys[:, None, :]
    weights = wx[:, :, None] * wy[:, None, :]
    values = kernel_diagonal(f, c, m, points.ravel()).reshape(points.shape)
    return (values * weights).sum(axis=(1, 2)) / (region.width * region.height)


def get_sampling_agent() -> SamplingAgent:
    return SamplingAgent()
