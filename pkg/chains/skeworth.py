from dataclasses import dataclass
from typing import Sequence

import numpy as np
from numpy.polynomial import Polynomial

from models.errors import ConsistencyError, DegeneracyError, DimensionError
from models.measure import MeasureKind, WeightedMeasure
from tools.epsilon import border_integrals, skew_gram
from tools.identities import inverse_transpose
from chains.partition import (
    build_moment_matrices,
    check_odd,
    monic_rows,
    monomial_basis,
    normalization,
)
from utils.logger import get_logger


logger = get_logger(__name__)

DEGENERACY = 1e-10
STRUCTURE_TOL = 1e-8
SHADOW_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class SkewOrthFamily:
    """
    Monic q_0..q_{n-1} with ⟨q_{2j}|q_{2j+1}⟩ = r_j, every other skew product
    among them zero, and border values s_k = ∫ q_k dν₁.
    """

    n: int
    coeffs: np.ndarray
    r: np.ndarray
    s: np.ndarray
    kind: MeasureKind

    @property
    def pairs(self) -> int:
        return (self.n - 1) // 2

    def polynomials(self) -> list[Polynomial]:
        return [Polynomial(row[: k + 1]) for k, row in enumerate(self.coeffs)]


@dataclass(frozen=True, eq=False)
class InverseMatrix:
    """C = (W^ν)^{-T} from the closed form, with the gap to a dense LU inverse."""

    c: np.ndarray
    shadow_gap: float


def _project(v: np.ndarray, q: list, r: list, gram: np.ndarray) -> np.ndarray:
    # clear ⟨v|q_{2i}⟩ and ⟨v|q_{2i+1}⟩ for every finished pair
    out = v.copy()
    for i, ri in enumerate(r):
        even, odd = q[2 * i], q[2 * i + 1]
        out = out - (v @ gram @ odd) / ri * even + (v @ gram @ even) / ri * odd
    return out


def construct_family(m: WeightedMeasure, n: int, basis=None) -> SkewOrthFamily:
    """
    Skew Gram–Schmidt in coefficient space.

    Pairs (2j, 2j+1) are processed in ascending order; each new member is
    cleared against all finished pairs, and q_{2j+1} loses its x^{2j}
    coefficient by subtracting a multiple of q_{2j}. The last polynomial is
    cleared against every pair.

    Args:
        m: Weighted measure
        n: Odd family size
        basis: Optional monic starting basis (monomials by default)

    Returns:
        SkewOrthFamily

    Raises:
        DegeneracyError: A normalization r_j or s_{n-1} vanishes numerically
    """
    n = check_odd(n)
    start = monic_rows(monomial_basis(n) if basis is None else basis, n)
    gram = skew_gram(np.eye(n), m)
    moments = border_integrals(np.eye(n), m)
    scale = max(float(np.max(np.abs(gram))), float(np.max(np.abs(moments))))

    q: list[np.ndarray] = []
    r: list[float] = []
    for j in range((n - 1) // 2):
        even = _project(start[2 * j], q, r, gram)
        odd = _project(start[2 * j + 1], q, r, gram)
        rj = float(even @ gram @ odd)
        if abs(rj) < DEGENERACY * scale:
            raise DegeneracyError(f"r_{j} = {rj:.3e} vanishes; the weight admits no skew-orthogonal family")
        odd = odd - odd[2 * j] * even
        q.extend([even, odd])
        r.append(rj)
    q.append(_project(start[n - 1], q, r, gram))

    coeffs = np.array(q)
    s = coeffs @ moments
    if abs(s[-1]) < DEGENERACY * scale:
        raise DegeneracyError(f"s_{n - 1} = {s[-1]:.3e} vanishes")

    family = SkewOrthFamily(n=n, coeffs=coeffs, r=np.array(r), s=s, kind=m.kind)
    _check_structure(family, coeffs @ gram @ coeffs.T)
    logger.debug("skew-orthogonal family kind=%s n=%d r=%s", m.kind.value, n, family.r)
    return family


def _check_structure(f: SkewOrthFamily, products: np.ndarray) -> None:
    expected = family_w_matrix(f)[: f.n, : f.n]
    tol = STRUCTURE_TOL * max(1.0, float(np.max(np.abs(f.r))) if f.r.size else 1.0)
    gap = float(np.max(np.abs(products - expected)))
    if gap > tol:
        raise ConsistencyError(f"family is not skew-orthogonal (max deviation {gap:.3e})")


def family_w_matrix(f: SkewOrthFamily) -> np.ndarray:
    """W^ν in the skew-orthogonal basis: r_j blocks, zero row n-1, border s."""
    n = f.n
    w = np.zeros((n + 1, n + 1))
    for j, rj in enumerate(f.r):
        w[2 * j, 2 * j + 1] = rj
        w[2 * j + 1, 2 * j] = -rj
    w[:n, n] = f.s
    w[n, :n] = -f.s
    return w


def z_from_rs(f: SkewOrthFamily) -> float:
    return normalization(f.kind, f.n) * float(f.s[-1] * np.prod(f.r))


def invert_w(f: SkewOrthFamily) -> InverseMatrix:
    """
    Closed-form (W^ν)^{-T}, checked entrywise against a dense LU inverse.

    Raises:
        DegeneracyError: Some r_j or s_{n-1} is zero
        ConsistencyError: Closed form and LU shadow disagree
    """
    n = f.n
    if np.any(f.r == 0.0) or f.s[-1] == 0.0:
        raise DegeneracyError("cannot invert W: a normalization r_j or s_{n-1} is zero")
    last = n - 1
    sl = f.s[-1]
    c = np.zeros((n + 1, n + 1))
    for j, rj in enumerate(f.r):
        e, o = 2 * j, 2 * j + 1
        c[e, o] = 1.0 / rj
        c[o, e] = -1.0 / rj
        c[e, last] = -f.s[o] / (rj * sl)
        c[last, e] = f.s[o] / (rj * sl)
        c[o, last] = f.s[e] / (rj * sl)
        c[last, o] = -f.s[e] / (rj * sl)
    c[last, n] = 1.0 / sl
    c[n, last] = -1.0 / sl

    shadow = inverse_transpose(family_w_matrix(f))
    gap = float(np.max(np.abs(c - shadow)))
    if gap > SHADOW_TOL * max(1.0, float(np.max(np.abs(c)))):
        raise ConsistencyError(f"closed-form inverse differs from LU inverse by {gap:.3e}")
    return InverseMatrix(c=c, shadow_gap=gap)


def regauge(f: SkewOrthFamily, alphas: Sequence[float]) -> SkewOrthFamily:
    """Replace q_{2j+1} by q_{2j+1} + α_j q_{2j}; r is unchanged and s follows linearly."""
    if len(alphas) != f.pairs:
        raise DimensionError(f"need {f.pairs} gauge parameters, got {len(alphas)}")
    coeffs = f.coeffs.copy()
    s = f.s.copy()
    for j, alpha in enumerate(alphas):
        coeffs[2 * j + 1] += alpha * coeffs[2 * j]
        s[2 * j + 1] += alpha * s[2 * j]
    return SkewOrthFamily(n=f.n, coeffs=coeffs, r=f.r.copy(), s=s, kind=f.kind)


def family_moment_check(f: SkewOrthFamily, m: WeightedMeasure) -> float:
    """Largest gap between the closed W pattern and W assembled from the moments of q."""
    mm = build_moment_matrices(m, f.coeffs, f.n)
    return float(np.max(np.abs(mm.w.entries - family_w_matrix(f))))
