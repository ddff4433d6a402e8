import math
from functools import lru_cache
from pathlib import Path
from typing import Optional

import numpy as np
from scipy.optimize import brentq
from scipy.special import erfcx

from config import get_settings
from models.errors import ConfigurationError
from models.measure import MeasureKind, WeightedMeasure
from tools.utils.quadrature import (
    composite_legendre_rule,
    gaussian_partial_moments,
    gaussian_rule,
    half_plane_rule,
    legendre_on,
)
from tools.utils.weight_table import WeightTable
from utils.logger import get_logger


logger = get_logger(__name__)

MIN_NODES = 8
NEGLIGIBLE = 1e-18

# e^{-x²/2} < 1e-18 beyond this
GAUSSIAN_EDGE = math.sqrt(2.0 * math.log(1.0 / NEGLIGIBLE))


def gaussian_weight(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    return np.exp(-0.5 * x * x)


def ginibre_y_density(y: np.ndarray) -> np.ndarray:
    """e^{y²} erfc(√2|y|) written through erfcx so it never overflows."""
    y = np.abs(np.asarray(y, dtype=float))
    return np.exp(-y * y) * erfcx(np.sqrt(2.0) * y)


def ginibre_complex_weight(z: np.ndarray) -> np.ndarray:
    """|e^{-z²/2}| · sqrt(erfc(√2 |Im z|)), symmetric under conjugation."""
    z = np.asarray(z, dtype=complex)
    return np.exp(-0.5 * z.real * z.real) * np.sqrt(ginibre_y_density(z.imag))


@lru_cache()
def ginibre_truncation(level: float = NEGLIGIBLE) -> float:
    """Height above which e^{y²} erfc(√2 y) stays below level."""
    return float(brentq(lambda y: math.log(ginibre_y_density(y)) - math.log(level), 0.5, 12.0))


def _check_nodes(name: str, value: Optional[int]) -> int:
    if value is None or value < MIN_NODES:
        raise ConfigurationError(f"{name} must be >= {MIN_NODES}, got {value}")
    return int(value)


def _custom_partial_moments(table: WeightTable, per_interval: int):
    edges = table.x

    def partial(p: np.ndarray, degree: int) -> np.ndarray:
        p = np.asarray(p, dtype=float)
        flat = np.clip(p.ravel(), table.lo, table.hi)
        powers = np.arange(degree + 1)[:, None, None]

        nodes, wts = legendre_on(edges[:-1], edges[1:], per_interval)
        full = np.sum(nodes[None] ** powers * (wts * table(nodes))[None], axis=-1)
        cumulative = np.concatenate([np.zeros((degree + 1, 1)), np.cumsum(full, axis=1)], axis=1)

        idx = np.clip(np.searchsorted(edges, flat, side="right") - 1, 0, len(edges) - 2)
        nodes, wts = legendre_on(edges[idx], flat, per_interval)
        piece = np.sum(nodes[None] ** powers * (wts * table(nodes))[None], axis=-1)
        return (cumulative[:, idx] + piece).reshape((degree + 1,) + p.shape)

    return partial


def build_measure(
    kind: MeasureKind | str,
    n_real_nodes: int,
    n_complex_nodes: Optional[int] = None,
    n_complex_re: Optional[int] = None,
    table: Optional[WeightTable] = None,
) -> WeightedMeasure:
    """
    Build a weighted measure with its quadrature rules.

    Args:
        kind: hermitian-beta1, real-asymmetric or custom
        n_real_nodes: Nodes of the real-line rule (per knot interval is derived for custom)
        n_complex_nodes: Nodes in the imaginary direction of the half-plane rule
        n_complex_re: Nodes in the real direction of the half-plane rule
                      (defaults to settings.nodes_complex_re)
        table: Tabulated weight, required for custom

    Returns:
        WeightedMeasure

    Raises:
        ConfigurationError: Unsupported kind, missing table or too few nodes
    """
    kind = MeasureKind.parse(kind)
    n_real = _check_nodes("n_real_nodes", n_real_nodes)

    if kind is MeasureKind.CUSTOM:
        if table is None:
            raise ConfigurationError("custom measures need a weight table")
        per_interval = max(MIN_NODES, math.ceil(n_real / (len(table.x) - 1)))
        measure = WeightedMeasure(
            kind=kind,
            real_weight=table,
            real_rule=composite_legendre_rule(table.x, per_interval, table),
            partial_moments=_custom_partial_moments(table, per_interval),
            support=(table.lo, table.hi),
            breakpoints=tuple(float(x) for x in table.x[1:-1]),
        )
        logger.debug("built measure kind=custom source=%s nodes=%d", table.source, len(measure.real_rule))
        return measure

    complex_weight = complex_rule = None
    if kind is MeasureKind.REAL_ASYMMETRIC:
        n_im = _check_nodes("n_complex_nodes", n_complex_nodes)
        n_re = _check_nodes(
            "n_complex_re", n_complex_re if n_complex_re is not None else get_settings().nodes_complex_re
        )
        complex_weight = ginibre_complex_weight
        complex_rule = half_plane_rule(n_re, n_im, ginibre_truncation(), ginibre_y_density)

    measure = WeightedMeasure(
        kind=kind,
        real_weight=gaussian_weight,
        real_rule=gaussian_rule(n_real),
        partial_moments=gaussian_partial_moments,
        support=(-GAUSSIAN_EDGE, GAUSSIAN_EDGE),
        complex_weight=complex_weight,
        complex_rule=complex_rule,
    )
    logger.debug(
        "built measure kind=%s real_nodes=%d complex_nodes=%d",
        kind.value, len(measure.real_rule), len(complex_rule) if complex_rule else 0,
    )
    return measure


@lru_cache(maxsize=16)
def get_measure(
    kind: str,
    n_real_nodes: Optional[int] = None,
    n_complex_nodes: Optional[int] = None,
    n_complex_re: Optional[int] = None,
    weight_file: Optional[str] = None,
) -> WeightedMeasure:
    """Cached measure; node counts default to the settings."""
    settings = get_settings()
    kind = MeasureKind.parse(kind)
    table = WeightTable.from_file(Path(weight_file)) if weight_file else None
    return build_measure(
        kind,
        n_real_nodes or settings.nodes_real,
        (n_complex_nodes or settings.nodes_complex_im) if kind is MeasureKind.REAL_ASYMMETRIC else None,
        n_complex_re,
        table=table,
    )
