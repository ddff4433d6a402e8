import numpy as np
import pytest
from scipy.integrate import dblquad, quad

from models.errors import ConfigurationError, DomainError
from tools.sampler import expected_real_count
from chains.correlation import correlation_asymmetric, correlation_bruteforce, correlation_hermitian
from chains.kernel import kernel_diagonal


@pytest.mark.parametrize("y", np.linspace(-3.0, 3.0, 11))
def test_one_point_matches_bruteforce(gaussian, gaussian_family, y):
    f, c = gaussian_family
    pfaffian = correlation_hermitian(f, c, gaussian, [y])
    assert pfaffian == pytest.approx(kernel_diagonal(f, c, gaussian, [y])[0], rel=1e-10)
    assert pfaffian == pytest.approx(correlation_bruteforce(gaussian, 3, x=[y]), rel=1e-5)


def test_one_point_integrates_to_n(gaussian, gaussian_family):
    f, c = gaussian_family
    total, _ = quad(lambda y: kernel_diagonal(f, c, gaussian, [y])[0], -np.inf, np.inf, epsabs=1e-10)
    assert total == pytest.approx(3.0, abs=1e-6)


@pytest.mark.parametrize("points", [(-0.8, 0.4), (0.1, 1.9), (-2.2, -1.0, 0.7)])
def test_higher_correlations_match_bruteforce(gaussian, gaussian_family, points):
    f, c = gaussian_family
    value = correlation_hermitian(f, c, gaussian, list(points))
    assert value > 0
    assert value == pytest.approx(correlation_bruteforce(gaussian, 3, x=points), rel=1e-4)


def test_correlation_is_symmetric_in_points(gaussian, gaussian_family):
    f, c = gaussian_family
    forward = correlation_hermitian(f, c, gaussian, [-0.3, 0.5, 1.2])
    shuffled = correlation_hermitian(f, c, gaussian, [1.2, -0.3, 0.5])
    assert shuffled == pytest.approx(forward, rel=1e-10)


@pytest.mark.parametrize("x", [-1.5, 0.0, 0.8])
def test_real_density_matches_bruteforce(ginibre, ginibre_family, x):
    f, c = ginibre_family
    value = correlation_asymmetric(f, c, ginibre, [x], [])
    assert value == pytest.approx(correlation_bruteforce(ginibre, 3, x=[x]), rel=1e-3)


@pytest.mark.parametrize("z", [0.2 + 0.5j, -0.9 + 1.3j, 0.4 - 0.7j])
def test_complex_density_matches_bruteforce(ginibre, ginibre_family, z):
    f, c = ginibre_family
    value = correlation_asymmetric(f, c, ginibre, [], [z])
    assert value > 0
    assert value == pytest.approx(correlation_bruteforce(ginibre, 3, z=[z]), rel=1e-3)


def test_mixed_correlation_matches_bruteforce(ginibre, ginibre_family):
    f, c = ginibre_family
    value = correlation_asymmetric(f, c, ginibre, [0.3], [-0.4 + 0.9j])
    assert value == pytest.approx(correlation_bruteforce(ginibre, 3, x=[0.3], z=[-0.4 + 0.9j]), rel=1e-3)


def test_expected_number_of_real_eigenvalues(ginibre, ginibre_family):
    f, c = ginibre_family
    total, _ = quad(lambda x: kernel_diagonal(f, c, ginibre, [x])[0], -np.inf, np.inf, epsabs=1e-10)
    assert total == pytest.approx(expected_real_count(3), rel=1e-6)


def test_expected_number_of_pairs(ginibre, ginibre_family):
    f, c = ginibre_family
    total, _ = dblquad(
        lambda y, x: kernel_diagonal(f, c, ginibre, [complex(x, y)])[0],
        -7.0, 7.0, 1e-12, 6.0, epsabs=1e-8,
    )
    assert total == pytest.approx((3.0 - expected_real_count(3)) / 2.0, rel=1e-4)


def test_argument_checks(gaussian, ginibre, gaussian_family, ginibre_family):
    f, c = gaussian_family
    with pytest.raises(DomainError):
        correlation_hermitian(f, c, gaussian, [0.1, 0.2 + 0.3j])
    with pytest.raises(ConfigurationError):
        correlation_hermitian(f, c, gaussian, [])

    g, d = ginibre_family
    with pytest.raises(DomainError):
        correlation_asymmetric(g, d, ginibre, [0.5 + 0.2j], [])
    with pytest.raises(DomainError):
        correlation_asymmetric(g, d, ginibre, [], [0.4])
    with pytest.raises(ConfigurationError):
        correlation_asymmetric(g, d, ginibre, [0.1, 0.2], [0.3 + 0.4j])
    with pytest.raises(ConfigurationError):
        correlation_asymmetric(g, d, ginibre, [], [])


def test_bruteforce_argument_checks(gaussian, ginibre):
    with pytest.raises(DomainError):
        correlation_bruteforce(ginibre, 3, z=[0.5])
    with pytest.raises(DomainError):
        correlation_bruteforce(gaussian, 3, z=[0.5 + 0.5j])
    with pytest.raises(ConfigurationError):
        correlation_bruteforce(gaussian, 3, x=[0.1, 0.2, 0.3, 0.4])
    with pytest.raises(ConfigurationError):
        correlation_bruteforce(gaussian, 3)


def test_one_point_function_is_even_for_gaussian_weight(gaussian, gaussian_family):
    f, c = gaussian_family
    y = np.linspace(0.0, 4.0, 17)
    np.testing.assert_allclose(
        kernel_diagonal(f, c, gaussian, -y), kernel_diagonal(f, c, gaussian, y), rtol=1e-10, atol=1e-15,
    )


def test_complex_density_vanishes_toward_real_axis(ginibre, ginibre_family):
    f, c = ginibre_family
    heights = [0.2, 0.05, 1e-3, 1e-6]
    values = [correlation_asymmetric(f, c, ginibre, [], [complex(0.3, h)]) for h in heights]
    assert all(a > b > 0 for a, b in zip(values, values[1:]))
    assert values[-1] < 1e-5


@pytest.mark.parametrize("z", [0.3 + 0.5j, -1.2 + 0.05j, 0.7 + 1.6j])
def test_complex_density_is_conjugation_invariant(ginibre, ginibre_family, z):
    f, c = ginibre_family
    upper = correlation_asymmetric(f, c, ginibre, [], [z])
    assert correlation_asymmetric(f, c, ginibre, [], [z.conjugate()]) == pytest.approx(upper, rel=1e-14)
