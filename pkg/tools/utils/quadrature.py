"""Gauss rules on the line, the upper half-plane and ordered simplices."""

from typing import Callable, Sequence

import numpy as np
from numpy.polynomial.hermite import hermgauss
from numpy.polynomial.hermite_e import hermegauss
from numpy.polynomial.legendre import leggauss
from scipy.special import erfc

from models.measure import QuadratureRule


SQRT_HALF_PI = np.sqrt(np.pi / 2.0)

# erfc(-p/sqrt2) and p**k * exp(-p**2/2) are exact at +-40 for any degree we use
_MOMENT_CLIP = 40.0


def gaussian_rule(n: int) -> QuadratureRule:
    """Gauss–Hermite rule for ∫ f(x) e^{-x²/2} dx."""
    nodes, weights = hermegauss(n)
    return QuadratureRule(nodes=nodes, weights=weights, exact_degree=2 * n - 1)


def gaussian_partial_moments(p: np.ndarray, degree: int) -> np.ndarray:
    """
    Partial Gaussian moments ∫_{-∞}^{p} x^k e^{-x²/2} dx for k = 0..degree.

    Uses I_0 = √(π/2) erfc(-p/√2), I_1 = -e^{-p²/2} and
    I_k = -p^{k-1} e^{-p²/2} + (k-1) I_{k-2}. Infinite p is allowed.

    Args:
        p: Upper limits (any shape, real)
        degree: Highest power

    Returns:
        Array of shape (degree + 1, *p.shape)
    """
    p = np.clip(np.asarray(p, dtype=float), -_MOMENT_CLIP, _MOMENT_CLIP)
    gauss = np.exp(-0.5 * p * p)
    out = np.empty((degree + 1,) + p.shape)
    out[0] = SQRT_HALF_PI * erfc(-p / np.sqrt(2.0))
    if degree >= 1:
        out[1] = -gauss
    for k in range(2, degree + 1):
        out[k] = -(p ** (k - 1)) * gauss + (k - 1) * out[k - 2]
    return out


def legendre_on(a, b, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss–Legendre nodes/weights mapped to [a, b]; a and b broadcast."""
    t, v = leggauss(n)
    a = np.asarray(a, dtype=float)[..., None]
    b = np.asarray(b, dtype=float)[..., None]
    half = 0.5 * (b - a)
    return a + half * (t + 1.0), half * v


def composite_legendre_rule(
    edges: Sequence[float],
    per_interval: int,
    weight: Callable[[np.ndarray], np.ndarray],
) -> QuadratureRule:
    """
    Composite Gauss–Legendre rule for ∫ f(x) weight(x) dx over [edges[0], edges[-1]].

    Nodes where the weight vanishes are dropped so every rule weight stays positive.
    """
    edges = np.asarray(edges, dtype=float)
    nodes, base = legendre_on(edges[:-1], edges[1:], per_interval)
    nodes, base = nodes.ravel(), base.ravel()
    weights = base * weight(nodes)
    keep = weights > 0
    # cubic weights times degree-d polynomials are exact for d <= 2*per_interval - 4
    return QuadratureRule(nodes=nodes[keep], weights=weights[keep], exact_degree=2 * per_interval - 4)


def half_plane_rule(
    n_re: int,
    n_im: int,
    y_max: float,
    y_density: Callable[[np.ndarray], np.ndarray],
) -> QuadratureRule:
    """
    Product rule on the upper half-plane for ∫∫ f(x + iy) e^{-x²} ρ(y) dx dy.

    Gauss–Hermite (e^{-x²}) in the real direction, Gauss–Legendre on
    [0, y_max] in the imaginary direction with the weights multiplied by ρ.
    """
    xs, hx = hermgauss(n_re)
    ys, hy = legendre_on(0.0, y_max, n_im)
    ys, hy = ys.ravel(), hy.ravel() * y_density(ys.ravel())
    nodes = (xs[:, None] + 1j * ys[None, :]).ravel()
    weights = (hx[:, None] * hy[None, :]).ravel()
    return QuadratureRule(nodes=nodes, weights=weights, exact_degree=2 * n_re - 1)


def ordered_rule(
    k: int,
    lo: float,
    hi: float,
    n_nodes: int,
    breakpoints: Sequence[float] = (),
) -> tuple[np.ndarray, np.ndarray]:
    """
    Tensor Gauss–Legendre rule on the simplex lo < x_k < ... < x_1 < hi.

    Each level integrates the next coordinate up to the one above it, with
    the interval split at every breakpoint so integrands with kinks there
    are handled piecewise exactly.

    Returns:
        points of shape (P, k) and weights of shape (P,)
    """
    cuts = sorted(float(b) for b in breakpoints if lo < b < hi)
    edges = [lo] + cuts
    points = np.zeros((1, 0))
    weights = np.ones(1)
    upper = np.full(1, float(hi))
    for _ in range(k):
        lows, highs = [], []
        for i, a in enumerate(edges):
            b = edges[i + 1] if i + 1 < len(edges) else np.inf
            lows.append(np.minimum(a, upper))
            highs.append(np.minimum(b, upper))
        lows = np.stack(lows, axis=1)
        highs = np.stack(highs, axis=1)
        x, v = legendre_on(lows, highs, n_nodes)
        n_piece = lows.shape[1]
        x = x.reshape(points.shape[0], n_piece * n_nodes)
        v = v.reshape(points.shape[0], n_piece * n_nodes)
        points = np.concatenate(
            [np.repeat(points, n_piece * n_nodes, axis=0), x.reshape(-1, 1)], axis=1
        )
        weights = (weights[:, None] * v).ravel()
        upper = x.ravel()
        keep = weights > 0
        points, weights, upper = points[keep], weights[keep], upper[keep]
    return points, weights
