import numpy as np
import pytest
import scipy.linalg

from models.errors import DimensionError, DomainError, SingularityError
from models.skew_matrix import SkewMatrix, standard_symplectic
from tools.identities import check_det_commutation, check_rains, inverse_transpose
from conftest import random_skew


def _dominant_skew(rng, dim):
    return SkewMatrix.from_array(2.0 * standard_symplectic(dim // 2).entries + random_skew(rng, dim, 0.15))


def test_inverse_transpose(rng):
    m = rng.standard_normal((5, 5)) + 5 * np.eye(5)
    np.testing.assert_allclose(inverse_transpose(m) @ m.T, np.eye(5), atol=1e-12)


def test_inverse_transpose_rejects_singular():
    with pytest.raises(SingularityError):
        inverse_transpose(np.ones((3, 3)))


def test_det_commutation(rng):
    for t, n in [(1, 1), (2, 5), (4, 3), (3, 3)]:
        lhs, rhs = check_det_commutation(0.5 * rng.standard_normal((t, n)), 0.5 * rng.standard_normal((n, t)))
        assert abs(lhs - rhs) <= 1e-9 * max(1.0, abs(rhs))


def test_det_commutation_shape_and_domain(rng):
    with pytest.raises(DimensionError):
        check_det_commutation(np.zeros((2, 3)), np.zeros((2, 3)))
    with pytest.raises(DomainError):
        check_det_commutation(np.full((1, 1), np.inf), np.zeros((1, 1)))


def test_rains(rng):
    for n, t in [(1, 1), (1, 3), (2, 2), (3, 1), (3, 3)]:
        a = 0.5 * rng.standard_normal((2 * n, 2 * t))
        lhs, rhs = check_rains(a, _dominant_skew(rng, 2 * t), _dominant_skew(rng, 2 * n))
        assert abs(lhs - rhs) <= 1e-9 * max(1.0, abs(rhs))


def test_rains_pads_odd_rows(rng):
    a = 0.5 * rng.standard_normal((3, 2))
    lhs, rhs = check_rains(a, _dominant_skew(rng, 2), _dominant_skew(rng, 4))
    assert lhs == pytest.approx(rhs, rel=1e-9, abs=1e-9)


def test_rains_shape_mismatch(rng):
    with pytest.raises(DimensionError):
        check_rains(np.zeros((2, 4)), _dominant_skew(rng, 2), _dominant_skew(rng, 2))


def test_rains_singular_b(rng):
    with pytest.raises(SingularityError):
        check_rains(np.zeros((2, 2)), SkewMatrix(np.zeros((2, 2))), _dominant_skew(rng, 2))


def test_rains_is_invariant_under_symplectic_change_of_a(rng):
    # Q = exp(J S) with S symmetric satisfies Q J Qᵀ = J, so B = 2J is preserved
    j = standard_symplectic(2).entries
    s = rng.standard_normal((4, 4))
    q = scipy.linalg.expm(0.1 * j @ (s + s.T))
    b = SkewMatrix.from_array(2.0 * j)
    np.testing.assert_allclose(q @ b.entries @ q.T, b.entries, atol=1e-10)

    a = 0.4 * rng.standard_normal((6, 4))
    c = _dominant_skew(rng, 6)
    before = check_rains(a, b, c)
    after = check_rains(a @ q, b, c)
    assert after[0] == pytest.approx(before[0], abs=1e-8)
    assert after[1] == pytest.approx(before[1], abs=1e-8)
