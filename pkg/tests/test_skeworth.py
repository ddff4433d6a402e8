import math

import numpy as np
import pytest

from models.errors import DegeneracyError, DimensionError
from models.measure import MeasureKind
from chains.partition import build_moment_matrices, monomial_basis, shifted_basis, z_pfaffian
from chains.skeworth import (
    SkewOrthFamily,
    construct_family,
    family_moment_check,
    family_w_matrix,
    invert_w,
    regauge,
    z_from_rs,
)
from tools.pfaffian import pf
from conftest import SQRT_2PI


def test_gaussian_family(gaussian_family):
    f, _ = gaussian_family
    np.testing.assert_allclose(f.coeffs, [[1, 0, 0], [0, 1, 0], [-0.5, 0, 1]], atol=1e-12)
    np.testing.assert_allclose(f.r, [-2.0 * math.sqrt(math.pi)], rtol=1e-12)
    np.testing.assert_allclose(f.s, [SQRT_2PI, 0.0, SQRT_2PI / 2], atol=1e-12)


def test_ginibre_family(ginibre_family):
    f, _ = ginibre_family
    np.testing.assert_allclose(f.coeffs, np.eye(3), atol=1e-8)
    np.testing.assert_allclose(f.r, [-2.0 * math.sqrt(2.0 * math.pi)], rtol=1e-8)
    assert f.s[2] == pytest.approx(SQRT_2PI, rel=1e-10)


def test_z_from_family_matches_pfaffian(gaussian, ginibre, gaussian_family, ginibre_family):
    for m, (f, _) in ((gaussian, gaussian_family), (ginibre, ginibre_family)):
        z = z_pfaffian(build_moment_matrices(m, monomial_basis(3), 3))
        assert z_from_rs(f) == pytest.approx(z, rel=1e-9)


def test_pfaffian_of_family_matrix(gaussian):
    f = construct_family(gaussian, 5)
    w = family_w_matrix(f)
    assert pf(w) == pytest.approx(f.s[-1] * np.prod(f.r), rel=1e-9)
    assert family_moment_check(f, gaussian) < 1e-9


def test_inverse_matrix(gaussian_family, ginibre_family):
    for f, c in (gaussian_family, ginibre_family):
        w = family_w_matrix(f)
        np.testing.assert_allclose(w.T @ c.c, np.eye(f.n + 1), atol=1e-9)
        assert c.shadow_gap < 1e-9


def test_starting_basis_does_not_matter(gaussian):
    f = construct_family(gaussian, 5)
    g = construct_family(gaussian, 5, basis=shifted_basis(5, -0.3))
    np.testing.assert_allclose(g.r, f.r, rtol=1e-9)
    assert g.s[-1] == pytest.approx(f.s[-1], rel=1e-9)
    # rebuilding from the family itself is idempotent
    h = construct_family(gaussian, 5, basis=f.coeffs)
    np.testing.assert_allclose(h.coeffs, f.coeffs, atol=1e-10)


def test_regauge_keeps_structure(gaussian):
    f = construct_family(gaussian, 5)
    g = regauge(f, [0.7, -1.3])
    np.testing.assert_array_equal(g.r, f.r)
    assert g.s[-1] == f.s[-1]
    assert family_moment_check(g, gaussian) < 1e-9
    with pytest.raises(DimensionError):
        regauge(f, [1.0])


def test_degenerate_family_cannot_be_inverted():
    f = SkewOrthFamily(n=3, coeffs=np.eye(3), r=np.array([0.0]), s=np.array([1.0, 0.0, 1.0]),
                       kind=MeasureKind.HERMITIAN_BETA1)
    with pytest.raises(DegeneracyError):
        invert_w(f)
