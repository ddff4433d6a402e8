import numpy as np
import pytest

from models.errors import DimensionError, DomainError
from models.skew_matrix import standard_symplectic
from tools.identities import inverse_transpose
from tools.measures import gaussian_weight
from tools.pfaffian import pf, pf_minor_expansion
from chains.correlation import correlation_asymmetric, correlation_hermitian
from chains.kernel import (
    assemble_tw_matrices,
    generating_check,
    generating_coefficients,
    kernel_diagonal,
    kernel_entries,
    kernel_entries_generic,
    kernel_matrix,
    real_reduce,
)
from chains.partition import build_moment_matrices, monomial_basis, shifted_basis
from chains.skeworth import construct_family, invert_w, regauge
from conftest import SQRT_2PI


def _entries(evaluation):
    return np.array([evaluation.ds, evaluation.s, evaluation.s_swapped, evaluation.sni])


def _generic(m, basis, n, y, y2):
    c = inverse_transpose(build_moment_matrices(m, basis, n).w.entries)
    return kernel_entries_generic(basis, c, m, y, y2)


@pytest.mark.parametrize("y, y2", [(0.3, -0.7), (1.1, 1.1), (-2.0, 0.25)])
def test_simplified_matches_generic_hermitian(gaussian, gaussian_family, y, y2):
    f, c = gaussian_family
    fast = _entries(kernel_entries(f, c, gaussian, y, y2))
    slow = _entries(_generic(gaussian, monomial_basis(3), 3, y, y2))
    np.testing.assert_allclose(fast, slow, atol=1e-8)


@pytest.mark.parametrize("y, y2", [(0.3, 0.5 + 0.6j), (-0.2 + 1.1j, 0.4 + 0.3j), (0.9, -0.6)])
def test_simplified_matches_generic_asymmetric(ginibre, ginibre_family, y, y2):
    f, c = ginibre_family
    fast = _entries(kernel_entries(f, c, ginibre, y, y2))
    slow = _entries(_generic(ginibre, monomial_basis(3), 3, y, y2))
    np.testing.assert_allclose(fast, slow, atol=1e-8)


def test_kernel_is_basis_and_gauge_independent(gaussian):
    f = construct_family(gaussian, 5)
    c = invert_w(f)
    g = regauge(f, [0.8, -0.4])
    reference = _entries(kernel_entries(f, c, gaussian, 0.2, -1.3))
    np.testing.assert_allclose(_entries(kernel_entries(g, invert_w(g), gaussian, 0.2, -1.3)), reference, atol=1e-8)
    np.testing.assert_allclose(_entries(_generic(gaussian, shifted_basis(5, 0.6), 5, 0.2, -1.3)), reference, atol=1e-8)


def test_one_point_function_for_single_eigenvalue(gaussian):
    f = construct_family(gaussian, 1)
    c = invert_w(f)
    y = np.array([-1.0, 0.0, 0.4, 2.2])
    np.testing.assert_allclose(kernel_diagonal(f, c, gaussian, y), gaussian_weight(y) / SQRT_2PI, rtol=1e-12)


def test_diagonal_is_the_s_entry(ginibre, ginibre_family):
    f, c = ginibre_family
    points = [0.4, -1.2 + 0.0j, 0.3 + 0.9j]
    diagonal = kernel_diagonal(f, c, ginibre, points)
    for value, p in zip(diagonal, points):
        assert value == pytest.approx(kernel_entries(f, c, ginibre, p, p).s.real, rel=1e-12)
        assert value > 0


def test_block_has_half_sign_for_two_real_points(gaussian, gaussian_family):
    f, c = gaussian_family
    evaluation = kernel_entries(f, c, gaussian, -0.5, 0.5)
    block = evaluation.block()
    assert block[1, 1] == pytest.approx(evaluation.sni + 0.5)
    assert block[1, 0] == -evaluation.s_swapped


def test_kernel_matrix_reduces_to_real_skew(ginibre, ginibre_family):
    f, _ = ginibre_family
    points = [0.1, 0.7 + 0.4j]
    reduced = real_reduce(kernel_matrix(f, ginibre, points), points)
    assert reduced.dim == 4


def test_tracy_widom_matrices(gaussian, ginibre, gaussian_family, ginibre_family):
    tw = assemble_tw_matrices(gaussian, gaussian_family[0], [-0.4, 0.9], [0.3, 0.7])
    assert tw.gap < 1e-8
    assert tw.a.shape == (4, 4)
    tw = assemble_tw_matrices(ginibre, ginibre_family[0], [0.2, 0.4 + 0.5j], [0.5, 0.25])
    assert tw.gap < 1e-8


def test_generating_ratio_hermitian(gaussian, gaussian_family):
    f, c = gaussian_family
    lhs, rhs = generating_check(gaussian, f, c, [-0.4, 0.9], [0.3, 0.7])
    assert lhs == pytest.approx(rhs, rel=1e-8, abs=1e-8)


def test_generating_ratio_asymmetric(ginibre, ginibre_family):
    f, c = ginibre_family
    lhs, rhs = generating_check(ginibre, f, c, [0.2, 0.4 + 0.5j], [0.5, 0.25])
    assert lhs == pytest.approx(rhs, rel=1e-7, abs=1e-7)
    lhs, rhs = generating_check(ginibre, f, c, [-0.3, 1.1, 0.0 + 0.8j, 0.6 + 0.2j], [0.2, 0.4, 0.3, 0.1])
    assert lhs == pytest.approx(rhs, rel=1e-7, abs=1e-7)


def test_generating_coefficients_are_correlations(gaussian, gaussian_family):
    f, c = gaussian_family
    points = [-0.6, 0.35]
    coefficients = generating_coefficients(gaussian, f, points)
    assert coefficients[()] == pytest.approx(1.0, abs=1e-12)
    r1 = kernel_diagonal(f, c, gaussian, points)
    assert coefficients[(0,)] == pytest.approx(r1[0], rel=1e-6)
    assert coefficients[(1,)] == pytest.approx(r1[1], rel=1e-6)
    assert coefficients[(0, 1)] == pytest.approx(correlation_hermitian(f, c, gaussian, points), rel=1e-6)


def test_generating_coefficients_asymmetric(ginibre, ginibre_family):
    f, c = ginibre_family
    points = [0.25, 0.1 + 0.7j]
    coefficients = generating_coefficients(ginibre, f, points)
    r = kernel_diagonal(f, c, ginibre, points)
    assert coefficients[(0,)] == pytest.approx(r[0], rel=1e-5)
    assert coefficients[(1,)] == pytest.approx(r[1], rel=1e-5)
    mixed = correlation_asymmetric(f, c, ginibre, [0.25], [0.1 + 0.7j])
    assert coefficients[(0, 1)] == pytest.approx(mixed, rel=1e-5)


def test_tracy_widom_argument_checks(gaussian, gaussian_family):
    f, c = gaussian_family
    with pytest.raises(DimensionError):
        assemble_tw_matrices(gaussian, f, [0.1, 0.2, 0.3], [1.0, 1.0, 1.0])
    with pytest.raises(DomainError):
        generating_check(gaussian, f, c, [0.1, 0.2], [1.0, -0.5])


def test_generating_ratio_without_perturbation(gaussian, gaussian_family):
    f, c = gaussian_family
    lhs, rhs = generating_check(gaussian, f, c, [-0.4, 0.9], [0.0, 0.0])
    assert lhs == pytest.approx(1.0, abs=1e-12)
    assert rhs == pytest.approx(1.0, abs=1e-12)


def test_minor_expansion_of_kernel_matrix(ginibre, ginibre_family):
    f, _ = ginibre_family
    points = [-0.7, 0.2, 0.4 + 0.5j]
    j = standard_symplectic(len(points))
    k = real_reduce(kernel_matrix(f, ginibre, points, scale=[0.5, 0.8, 0.3]), points)
    assert pf_minor_expansion(j, k) == pytest.approx(pf(j + k), rel=1e-9)


@pytest.mark.parametrize("y, y2", [(0.3, -0.7), (0.3, 0.5 + 0.6j), (-0.2 + 1.1j, 0.4 + 0.3j)])
def test_ds_is_antisymmetric(ginibre, ginibre_family, y, y2):
    f, c = ginibre_family
    forward = kernel_entries(f, c, ginibre, y, y2)
    backward = kernel_entries(f, c, ginibre, y2, y)
    assert forward.ds == pytest.approx(-backward.ds, abs=1e-12)
    assert forward.sni == pytest.approx(-backward.sni, abs=1e-12)
    assert kernel_entries(f, c, ginibre, y, y).ds == pytest.approx(0.0, abs=1e-12)
