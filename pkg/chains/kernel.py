from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

import numpy as np

from models.errors import ConsistencyError, DimensionError, DomainError
from models.measure import WeightedMeasure
from models.skew_matrix import SkewMatrix, standard_symplectic
from models.spectral import SpectralPoint, as_points
from tools.epsilon import epsilon_values, evaluate
from tools.pfaffian import pf
from chains.partition import build_moment_matrices, monic_rows
from chains.skeworth import InverseMatrix, SkewOrthFamily
from utils.logger import get_logger


logger = get_logger(__name__)

TW_TOL = 1e-8
REAL_RESIDUE = 1e-8
ANTISYMMETRY = 1e-9


@dataclass(frozen=True, eq=False)
class PointFeatures:
    """Weighted polynomials q̃_n and εq̃_n at a set of points, plus the real-axis indicator."""

    values: np.ndarray
    chi: np.ndarray
    qt: np.ndarray
    eq: np.ndarray

    @property
    def count(self) -> int:
        return self.values.shape[0]


def point_features(coeffs: np.ndarray, m: WeightedMeasure, points: Sequence) -> PointFeatures:
    pts = as_points(points)
    z = np.array([p.value for p in pts], dtype=complex)
    chi = np.array([1.0 if p.is_real else 0.0 for p in pts])
    qt = evaluate(coeffs, z) * m.weight_at(z)
    eq = epsilon_values(coeffs, z, m)
    return PointFeatures(values=z, chi=chi, qt=qt, eq=eq)


@dataclass(frozen=True)
class KernelEvaluation:
    ds: complex
    s: complex
    s_swapped: complex
    sni: complex
    at: tuple[SpectralPoint, SpectralPoint]

    def block(self) -> np.ndarray:
        """K_N(y, y') with -S_N(y', y) below the diagonal and ½sgn(y' - y) added for two real points."""
        y, y2 = self.at
        half_sign = 0.5 * np.sign(y2.value.real - y.value.real) if (y.is_real and y2.is_real) else 0.0
        return np.array([[self.ds, self.s], [-self.s_swapped, self.sni + half_sign]], dtype=complex)


def _pair_sum(f: SkewOrthFamily, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    # Σ_j (x_{2j} y_{2j+1} - x_{2j+1} y_{2j}) / r_j as an (Pa, Pb) array
    top = f.n - 1
    inv_r = (1.0 / f.r)[:, None]
    return (x[0:top:2] * inv_r).T @ y[1:top:2] - (x[1:top:2] * inv_r).T @ y[0:top:2]


def _border_sum(f: SkewOrthFamily, x: np.ndarray) -> np.ndarray:
    # Σ_j (s_{2j+1} x_{2j} - s_{2j} x_{2j+1}) / r_j
    top = f.n - 1
    s_even, s_odd = f.s[0:top:2], f.s[1:top:2]
    return ((s_odd / f.r) @ x[0:top:2]) - ((s_even / f.r) @ x[1:top:2])


def simplified_entries(f: SkewOrthFamily, a: PointFeatures, b: PointFeatures):
    """
    DS_N, S_N(a, b), S_N(b, a) and the polynomial part of S_NI for all point
    pairs, from r and s alone. Each result has shape (len(a), len(b)).
    """
    last = f.n - 1
    sl = f.s[last]

    def s_entries(u: PointFeatures, v: PointFeatures) -> np.ndarray:
        return (
            2.0 * _pair_sum(f, u.qt, v.eq)
            + (2.0 / sl) * (np.outer(u.qt[last], _border_sum(f, v.eq)) - np.outer(_border_sum(f, u.qt), v.eq[last]))
            + np.outer(u.qt[last], v.chi) / sl
        )

    ds = (
        2.0 * _pair_sum(f, a.qt, b.qt)
        + (2.0 / sl) * (np.outer(a.qt[last], _border_sum(f, b.qt)) - np.outer(_border_sum(f, a.qt), b.qt[last]))
    )
    sni = (
        2.0 * _pair_sum(f, a.eq, b.eq)
        + (2.0 / sl) * (np.outer(a.eq[last], _border_sum(f, b.eq)) - np.outer(_border_sum(f, a.eq), b.eq[last]))
        + (np.outer(a.eq[last], b.chi) - np.outer(a.chi, b.eq[last])) / sl
    )
    return ds, s_entries(a, b), s_entries(b, a).T, sni


def generic_entries(c: np.ndarray, a: PointFeatures, b: PointFeatures):
    """The same four arrays from the double sums over an arbitrary inverse matrix C."""

    def extended(p: PointFeatures):
        alpha = np.vstack([np.sqrt(2.0) * p.qt, np.zeros((1, p.count))])
        beta = np.vstack([np.sqrt(2.0) * p.eq, p.chi[None, :] / np.sqrt(2.0)])
        return alpha, beta

    alpha_a, beta_a = extended(a)
    alpha_b, beta_b = extended(b)
    ds = alpha_a.T @ c @ alpha_b
    s = alpha_a.T @ c @ beta_b
    s_swapped = (alpha_b.T @ c @ beta_a).T
    sni = beta_a.T @ c @ beta_b
    return ds, s, s_swapped, sni


def _check_inverse(f: SkewOrthFamily, c: InverseMatrix) -> None:
    if c.c.shape != (f.n + 1, f.n + 1):
        raise DimensionError(f"inverse matrix has shape {c.c.shape}, family needs {(f.n + 1, f.n + 1)}")


def kernel_entries(
    f: SkewOrthFamily,
    c: InverseMatrix,
    m: WeightedMeasure,
    y,
    y2,
) -> KernelEvaluation:
    """Kernel entries at one point pair via the r, s formulas."""
    _check_inverse(f, c)
    p, p2 = as_points([y, y2])
    a = point_features(f.coeffs, m, [p])
    b = point_features(f.coeffs, m, [p2])
    ds, s, s_swapped, sni = simplified_entries(f, a, b)
    return KernelEvaluation(
        ds=complex(ds[0, 0]), s=complex(s[0, 0]), s_swapped=complex(s_swapped[0, 0]),
        sni=complex(sni[0, 0]), at=(p, p2),
    )


def kernel_entries_generic(
    basis_coeffs: np.ndarray,
    c_matrix: np.ndarray,
    m: WeightedMeasure,
    y,
    y2,
) -> KernelEvaluation:
    """
    Kernel entries from any monic basis p and C = (W^ν_p)^{-T}.

    Independent of r and s, so it serves as an oracle for kernel_entries.
    """
    p, p2 = as_points([y, y2])
    coeffs = np.atleast_2d(basis_coeffs)
    if c_matrix.shape != (coeffs.shape[0] + 1,) * 2:
        raise DimensionError(f"C has shape {c_matrix.shape}, basis has {coeffs.shape[0]} polynomials")
    a = point_features(coeffs, m, [p])
    b = point_features(coeffs, m, [p2])
    ds, s, s_swapped, sni = generic_entries(c_matrix, a, b)
    return KernelEvaluation(
        ds=complex(ds[0, 0]), s=complex(s[0, 0]), s_swapped=complex(s_swapped[0, 0]),
        sni=complex(sni[0, 0]), at=(p, p2),
    )


def kernel_diagonal(f: SkewOrthFamily, c: InverseMatrix, m: WeightedMeasure, points: Sequence) -> np.ndarray:
    """
    S_N(y, y) at every point, the one-point function (R_1, R_{1,0} or R_{0,1}).

    Raises:
        ConsistencyError: A value has a non-negligible imaginary part
    """
    _check_inverse(f, c)
    feats = point_features(f.coeffs, m, points)
    last = f.n - 1
    qt, eq = feats.qt, feats.eq
    pair = ((qt[0:last:2] * eq[1:last:2] - qt[1:last:2] * eq[0:last:2]) / f.r[:, None]).sum(axis=0)
    values = (
        2.0 * pair
        + (2.0 / f.s[last]) * (qt[last] * _border_sum(f, eq) - _border_sum(f, qt) * eq[last])
        + qt[last] * feats.chi / f.s[last]
    )
    residue = np.abs(values.imag)
    if np.any(residue > REAL_RESIDUE * np.maximum(1.0, np.abs(values.real))):
        raise ConsistencyError(f"one-point function has imaginary residue {float(residue.max()):.3e}")
    return values.real


def kernel_matrix(
    f: SkewOrthFamily,
    m: WeightedMeasure,
    points: Sequence,
    scale: np.ndarray | None = None,
) -> np.ndarray:
    """
    The 2P×2P complex matrix of blocks √(c_a c_b) K_N(y_a, y_b) in the given point order.

    Without scale every block has unit weight.
    """
    feats = point_features(f.coeffs, m, points)
    ds, s, s_swapped, sni = simplified_entries(f, feats, feats)
    real_values = feats.values.real
    half_sign = 0.5 * np.sign(real_values[None, :] - real_values[:, None]) * np.outer(feats.chi, feats.chi)
    count = feats.count
    k = np.zeros((2 * count, 2 * count), dtype=complex)
    k[0::2, 0::2] = ds
    k[0::2, 1::2] = s
    k[1::2, 0::2] = -s_swapped
    k[1::2, 1::2] = sni + half_sign
    if scale is not None:
        root = np.repeat(np.sqrt(np.asarray(scale, dtype=float)), 2)
        k = k * np.outer(root, root)
    return k


def real_reduce(matrix: np.ndarray, points: Sequence) -> SkewMatrix:
    """
    Congruence by [[½, i/2], [i, 1]] (determinant 1) on the slots of every
    complex point, which leaves the Pfaffian unchanged and makes all entries
    real; the result is checked for realness and antisymmetry.

    Raises:
        ConsistencyError: Imaginary residue or asymmetry above tolerance
    """
    pts = as_points(points)
    d = np.eye(matrix.shape[0], dtype=complex)
    block = np.array([[0.5, 0.5j], [1j, 1.0]])
    for i, p in enumerate(pts):
        if not p.is_real:
            d[2 * i: 2 * i + 2, 2 * i: 2 * i + 2] = block
    reduced = d @ matrix @ d.T
    scale = max(1.0, float(np.max(np.abs(reduced)))) if reduced.size else 1.0
    residue = float(np.max(np.abs(reduced.imag))) if reduced.size else 0.0
    if residue > REAL_RESIDUE * scale:
        raise ConsistencyError(f"reduced matrix has imaginary residue {residue:.3e}")
    real = reduced.real
    asym = float(np.max(np.abs(real + real.T))) if real.size else 0.0
    if asym > ANTISYMMETRY * scale:
        raise ConsistencyError(f"assembled correlation matrix is not antisymmetric ({asym:.3e})")
    return SkewMatrix.from_array(real, atol=ANTISYMMETRY * scale)


@dataclass(frozen=True, eq=False)
class TracyWidomMatrices:
    a: np.ndarray
    j: SkewMatrix
    e: SkewMatrix
    w_perturbed: np.ndarray
    gap: float


def _check_weights(points: Sequence, c_vals: Sequence[float]) -> np.ndarray:
    c_vals = np.asarray(c_vals, dtype=float)
    if c_vals.shape != (len(points),):
        raise DimensionError(f"need one c value per point, got {c_vals.shape} for {len(points)} points")
    if np.any(c_vals < 0) or not np.all(np.isfinite(c_vals)):
        raise DomainError("c values must be finite and >= 0")
    return c_vals


def perturbed_w(
    m: WeightedMeasure,
    basis,
    n: int,
    points: Sequence,
    c_vals: Sequence[float],
) -> np.ndarray:
    """
    W^{η+ν} assembled directly: the moment matrices of ν plus point masses
    c_t w(y_t) at each y_t (and at its conjugate for a complex pair).
    """
    points = as_points(points)
    c_vals = _check_weights(points, c_vals)
    mm = build_moment_matrices(m, basis, n)
    w = np.array(mm.w.entries, dtype=complex)
    if not points:
        return w.real
    feats = point_features(monic_rows(basis, n), m, points)
    qt, eq, chi = feats.qt, feats.eq, feats.chi
    real_values = feats.values.real
    u = 2.0 * ((qt * c_vals) @ eq.T - (eq * c_vals) @ qt.T)
    mass = np.outer(c_vals * chi, c_vals * chi) * np.sign(real_values[None, :] - real_values[:, None])
    u = u - qt @ mass @ qt.T
    w[:n, :n] += u
    border = qt @ (c_vals * chi)
    w[:n, n] += border
    w[n, :n] -= border
    residue = float(np.max(np.abs(w.imag)))
    if residue > REAL_RESIDUE * max(1.0, float(np.max(np.abs(w.real)))):
        raise ConsistencyError(f"perturbed moment matrix has imaginary residue {residue:.3e}")
    return w.real


def assemble_tw_matrices(
    m: WeightedMeasure,
    f: SkewOrthFamily,
    points: Sequence,
    c_vals: Sequence[float],
) -> TracyWidomMatrices:
    """
    Matrices A ((N+1)×2T), J and E with W^{η+ν} = W^ν + A J Aᵀ - A E Aᵀ.

    Raises:
        DimensionError: T odd or zero
        ConsistencyError: The product form disagrees with direct assembly
    """
    points = as_points(points)
    t_count = len(points)
    if t_count == 0 or t_count % 2:
        raise DimensionError(f"need an even, nonzero number of points, got {t_count}")
    c_vals = _check_weights(points, c_vals)
    n = f.n

    feats = point_features(f.coeffs, m, points)
    root = np.sqrt(2.0 * c_vals)
    a = np.zeros((n + 1, 2 * t_count), dtype=complex)
    a[:n, 0::2] = feats.qt * root
    a[:n, 1::2] = feats.eq * root
    a[n, 1::2] = feats.chi * np.sqrt(c_vals / 2.0)

    real_values = feats.values.real
    e = np.zeros((2 * t_count, 2 * t_count))
    e[0::2, 0::2] = (
        0.5 * np.sqrt(np.outer(c_vals, c_vals))
        * np.sign(real_values[None, :] - real_values[:, None])
        * np.outer(feats.chi, feats.chi)
    )
    j = standard_symplectic(t_count)
    w_nu = build_moment_matrices(m, f.coeffs, n).w.entries
    product = w_nu + a @ j.entries @ a.T - a @ e @ a.T

    direct = perturbed_w(m, f.coeffs, n, points, c_vals)
    gap = float(np.max(np.abs(product - direct)))
    if gap > TW_TOL * max(1.0, float(np.max(np.abs(direct)))):
        raise ConsistencyError(f"A J Aᵀ - A E Aᵀ misses the direct perturbation by {gap:.3e}")
    return TracyWidomMatrices(a=a, j=j, e=SkewMatrix(e), w_perturbed=direct, gap=gap)


def generating_check(
    m: WeightedMeasure,
    f: SkewOrthFamily,
    c: InverseMatrix,
    points: Sequence,
    c_vals: Sequence[float],
) -> tuple[float, float]:
    """
    Both sides of Z^{ν+η}/Z^ν = Pf(J + K).

    lhs comes from direct assembly of the perturbed moment matrix, rhs from
    the kernel blocks √(c_u c_t) K_N(y_u, y_t).
    """
    _check_inverse(f, c)
    points = as_points(points)
    if not points or len(points) % 2:
        raise DimensionError(f"need an even, nonzero number of points, got {len(points)}")
    c_vals = _check_weights(points, c_vals)

    w_nu = build_moment_matrices(m, f.coeffs, f.n).w
    w_eta = SkewMatrix.from_array(perturbed_w(m, f.coeffs, f.n, points, c_vals))
    lhs = pf(w_eta) / pf(w_nu)

    j = standard_symplectic(len(points))
    k = kernel_matrix(f, m, points, scale=c_vals)
    rhs = pf(real_reduce(j.entries + k, points))
    logger.debug("generating check points=%d lhs=%.17g rhs=%.17g", len(points), lhs, rhs)
    return float(lhs), float(rhs)


def generating_coefficients(
    m: WeightedMeasure,
    f: SkewOrthFamily,
    points: Sequence,
) -> dict[tuple[int, ...], float]:
    """
    Coefficients of the generating ratio as a polynomial in (c_1, ..., c_T).

    The ratio is multilinear in the c_t, so its values on {0, 1}^T determine
    every coefficient by inclusion-exclusion. The coefficient of ∏_{t∈S} c_t
    is the |S|-point correlation at the points in S.
    """
    points = as_points(points)
    w_nu = pf(build_moment_matrices(m, f.coeffs, f.n).w)
    t_count = len(points)
    values = {}
    for size in range(t_count + 1):
        for subset in combinations(range(t_count), size):
            c_vals = np.zeros(t_count)
            c_vals[list(subset)] = 1.0
            w_eta = SkewMatrix.from_array(perturbed_w(m, f.coeffs, f.n, points, c_vals))
            values[subset] = pf(w_eta) / w_nu
    coefficients = {}
    for subset in values:
        total = 0.0
        for size in range(len(subset) + 1):
            for inner in combinations(subset, size):
                total += (-1.0) ** (len(subset) - size) * values[inner]
        coefficients[subset] = total
    return coefficients
