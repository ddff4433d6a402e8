import math

import numpy as np
import pytest

from models.errors import ConfigurationError, NumericError
from tools.sampler import (
    SeededStream,
    classify,
    expected_real_count,
    ginibre_batch,
    goe_batch,
    goe_matrices,
    sample_ginibre_real,
    sample_goe,
)


def test_stream_is_deterministic():
    a = SeededStream(11).normal((4, 5))
    b = SeededStream(11).normal((4, 5))
    np.testing.assert_array_equal(a, b)
    assert not np.array_equal(a, SeededStream(12).normal((4, 5)))


def test_spawned_streams_are_reproducible():
    first = [s.uniform(3) for s in SeededStream(5).spawn(3)]
    second = [s.uniform(3) for s in SeededStream(5).spawn(3)]
    for x, y in zip(first, second):
        np.testing.assert_array_equal(x, y)
    assert not np.array_equal(first[0], first[1])


def test_box_muller_moments():
    values = SeededStream(2024).normal(200_001)
    assert values.shape == (200_001,)
    # 5 standard errors
    assert abs(values.mean()) < 5.0 / math.sqrt(values.size)
    assert abs(values.var() - 1.0) < 5.0 * math.sqrt(2.0 / values.size)


def test_goe_matrices_are_symmetric():
    g = goe_matrices(SeededStream(3), 4, 5)
    np.testing.assert_array_equal(g, np.swapaxes(g, -1, -2))


def test_goe_trace_of_square():
    # E[Σλ²] = E[tr A²] = 6 for n = 3, with variance 12
    batch = goe_batch(SeededStream(99), 100_000, 3)
    sums = np.sum(batch.reals ** 2, axis=1)
    assert abs(sums.mean() - 6.0) < 3.0 * math.sqrt(12.0 / sums.size)


def test_goe_single_eigenvalue_is_standard_normal():
    batch = goe_batch(SeededStream(1), 50_000, 1)
    values = batch.reals[:, 0]
    assert abs(values.mean()) < 5.0 / math.sqrt(values.size)
    assert batch.pairs.shape == (50_000, 0)


def test_fixed_seed_repeats():
    assert sample_goe(5, 42) == sample_goe(5, 42)
    assert sample_ginibre_real(5, 42) == sample_ginibre_real(5, 42)


def test_ginibre_samples_have_the_right_shape():
    assert len(sample_ginibre_real(1, 8).reals) == 1
    for seed in range(20):
        sample = sample_ginibre_real(3, seed)
        assert sample.n == 3
        assert len(sample.reals) % 2 == 1
        assert all(p.imag > 0 for p in sample.pairs)


def test_ginibre_batch_counts():
    batch = ginibre_batch(SeededStream(17), 2_000, 4)
    np.testing.assert_array_equal(batch.real_counts + 2 * batch.pair_counts, 4)
    reals = batch.reals[batch.real_counts == 4]
    assert np.all(np.diff(reals, axis=1) >= 0)


def test_classify_tolerates_round_off():
    eig = np.array([0.5 + 1e-12j, -0.2 + 0.7j, -0.2 - 0.7j + 1e-13])
    sample = classify(eig)
    assert sample.reals == (0.5,)
    assert len(sample.pairs) == 1
    assert sample.pairs[0] == pytest.approx(-0.2 + 0.7j, abs=1e-12)


def test_classify_rejects_unpaired_value():
    with pytest.raises(NumericError) as info:
        classify(np.array([0.1, 0.3 + 0.2j, 0.4 + 0.5j]), seed=13)
    assert "13" in str(info.value)


def test_size_must_be_positive():
    with pytest.raises(ConfigurationError):
        sample_goe(0, 1)
    with pytest.raises(ConfigurationError):
        expected_real_count(0)


def test_expected_real_count():
    assert expected_real_count(1) == pytest.approx(1.0, rel=1e-12)
    assert expected_real_count(2) == pytest.approx(math.sqrt(2.0), rel=1e-12)
    assert expected_real_count(3) == pytest.approx(1.0 + 1.0 / math.sqrt(2.0), rel=1e-12)


def test_classification_survives_matrix_perturbation():
    # eigenvalues 0.5 and -0.2 ± 0.7i
    rotation = np.array([[-0.2, 0.7, 0.0], [-0.7, -0.2, 0.0], [0.0, 0.0, 0.5]])
    basis = np.array([[1.0, 0.3, -0.2], [0.1, 1.0, 0.4], [0.5, -0.3, 1.0]])
    matrix = basis @ rotation @ np.linalg.inv(basis)
    noise = 1e-12 * SeededStream(6).normal((3, 3))
    for m in (matrix, matrix + noise):
        sample = classify(np.linalg.eigvals(m))
        assert len(sample.reals) == 1
        assert sample.reals[0] == pytest.approx(0.5, abs=1e-9)
        assert sample.pairs[0] == pytest.approx(-0.2 + 0.7j, abs=1e-9)
