import numpy as np
import pytest

from cmklr import (
    GAUSSIAN_BANDWIDTH_FACTORS,
    build_multi_view_bank,
    build_single_view_bank,
    cosine_kernel,
    gaussian_kernel,
    mean_pairwise_distance,
    normalize_unit_diagonal,
    polynomial_kernel,
    zscore,
)

from conftest import three_blobs


class TestMeanPairwiseDistance:
    def test_single_pair(self):
        assert mean_pairwise_distance([[0.0], [2.0]]) == 2.0

    def test_three_point_hand_case(self):
        # pairs: (0,1) -> 5, (0,2) -> 0, (1,2) -> 5; mean = 10/3
        X = [[0.0, 0.0], [3.0, 4.0], [0.0, 0.0]]
        assert mean_pairwise_distance(X) == pytest.approx(10.0 / 3.0, rel=1e-15)

    def test_identical_points_rejected(self):
        with pytest.raises(ValueError, match="identical"):
            mean_pairwise_distance([[1.0, 1.0], [1.0, 1.0]])

    def test_single_sample_rejected(self):
        with pytest.raises(ValueError):
            mean_pairwise_distance([[1.0, 2.0]])


class TestGaussianKernel:
    def test_unit_diagonal(self):
        rng = np.random.default_rng(0)
        K = gaussian_kernel(rng.random((6, 3)), delta=0.7)
        np.testing.assert_array_equal(np.diag(K.values), np.ones(6))

    def test_scalar_value_at_two_delta_squared(self):
        # ||x_i - x_j||^2 = 2 delta^2  ->  K_ij = exp(-1)
        delta = 1.3
        X = np.array([[0.0], [np.sqrt(2.0) * delta]])
        K = gaussian_kernel(X, delta)
        assert K.values[0, 1] == pytest.approx(np.exp(-1.0), rel=1e-12)

    def test_wide_bandwidth_limit(self):
        X, _ = three_blobs(n_per=10, d=4)
        d0 = mean_pairwise_distance(X)
        K = gaussian_kernel(X, 1e6 * d0)
        assert np.max(np.abs(K.values - 1.0)) < 1e-3
        assert K.values.min() > 0.999

    def test_nonpositive_delta_rejected(self):
        with pytest.raises(ValueError):
            gaussian_kernel([[0.0], [1.0]], 0.0)

    def test_exact_symmetry(self):
        rng = np.random.default_rng(1)
        K = gaussian_kernel(rng.random((15, 4)), 0.4).values
        np.testing.assert_array_equal(K, K.T)


class TestPolynomialKernel:
    def test_orthogonal_vectors(self):
        X = np.array([[1.0, 0.0], [0.0, 1.0]])
        K = polynomial_kernel(X, a=1.0, b=2)
        assert K.values[0, 1] == 1.0  # (1 + 0)^2

    def test_diagonal_value(self):
        K = polynomial_kernel(np.array([[2.0], [1.0]]), a=0.0, b=2)
        assert K.values[0, 0] == 16.0  # (0 + 4)^2

    def test_even_power_nonnegative(self):
        rng = np.random.default_rng(2)
        for b in (2, 4):
            K = polynomial_kernel(rng.standard_normal((10, 3)), a=0.0, b=b)
            assert K.values.min() >= 0.0

    def test_bad_degree_rejected(self):
        with pytest.raises(ValueError):
            polynomial_kernel([[1.0], [2.0]], a=0.0, b=0)


class TestCosineKernel:
    def test_orthogonal(self):
        K = cosine_kernel(np.array([[1.0, 0.0], [0.0, 1.0]]))
        assert K.values[0, 1] == 0.0

    def test_parallel(self):
        K = cosine_kernel(np.array([[1.0, 1.0], [2.0, 2.0]]))
        assert K.values[0, 1] == pytest.approx(1.0, abs=1e-15)

    def test_antiparallel(self):
        K = cosine_kernel(np.array([[1.0, 0.0], [-1.0, 0.0]]))
        assert K.values[0, 1] == -1.0

    def test_range_and_diagonal(self):
        rng = np.random.default_rng(3)
        K = cosine_kernel(rng.standard_normal((20, 5))).values
        assert K.min() >= -1.0 and K.max() <= 1.0
        np.testing.assert_array_equal(np.diag(K), np.ones(20))

    def test_zero_row_rejected(self):
        with pytest.raises(ValueError, match="zero-norm"):
            cosine_kernel(np.array([[0.0, 0.0], [1.0, 0.0]]))


class TestNormalizeUnitDiagonal:
    def test_hand_case(self):
        from cmklr import KernelMatrix

        K = KernelMatrix(np.array([[4.0, 2.0], [2.0, 1.0]]), "custom", {})
        out = normalize_unit_diagonal(K)
        np.testing.assert_allclose(out.values, np.ones((2, 2)), atol=1e-15)

    def test_idempotent_on_gaussian(self):
        rng = np.random.default_rng(4)
        K = gaussian_kernel(rng.random((8, 3)), 0.5)
        out = normalize_unit_diagonal(K)
        np.testing.assert_array_equal(out.values, K.values)

    def test_zero_diagonal_rejected(self):
        from cmklr import KernelMatrix

        K = KernelMatrix(np.array([[0.0, 1.0], [1.0, 1.0]]), "custom", {})
        with pytest.raises(ValueError, match="positive diagonal"):
            normalize_unit_diagonal(K)


class TestSingleViewBank:
    def test_twelve_kernels_symmetric_unit_diagonal(self, blob_data):
        X, _ = blob_data
        bank = build_single_view_bank(X[:40])
        assert len(bank) == 12
        for K in bank:
            np.testing.assert_array_equal(K.values, K.values.T)
            np.testing.assert_allclose(np.diag(K.values), 1.0, atol=1e-12)

    def test_bandwidth_grid_order(self, blob_data):
        X, _ = blob_data
        X = X[:30]
        bank = build_single_view_bank(X)
        d0 = mean_pairwise_distance(X)
        for i, factor in enumerate(GAUSSIAN_BANDWIDTH_FACTORS):
            assert bank[i].kind == "gaussian"
            assert bank[i].params["delta"] == pytest.approx(factor * d0, rel=1e-15)
        assert bank[0].params["delta"] == pytest.approx(0.01 * d0, rel=1e-15)
        assert [k.kind for k in bank[7:11]] == ["polynomial"] * 4
        assert [(k.params["a"], k.params["b"]) for k in bank[7:11]] == [
            (0.0, 2),
            (0.0, 4),
            (1.0, 2),
            (1.0, 4),
        ]
        assert bank[11].kind == "cosine"

    def test_last_entry_is_cosine_kernel(self, blob_data):
        X, _ = blob_data
        X = X[:25]
        bank = build_single_view_bank(X)
        np.testing.assert_array_equal(bank[11].values, cosine_kernel(X).values)

    def test_deterministic(self, blob_data):
        X, _ = blob_data
        X = X[:20]
        first = build_single_view_bank(X)
        second = build_single_view_bank(X)
        for a, b in zip(first, second):
            np.testing.assert_array_equal(a.values, b.values)
            assert a.params == b.params


class TestMultiViewBank:
    def test_two_kernels_per_view(self):
        rng = np.random.default_rng(5)
        views = [rng.random((12, d)) + 0.1 for d in (3, 4, 5, 2, 6, 3)]
        bank = build_multi_view_bank(views)
        assert len(bank) == 12
        assert [k.kind for k in bank] == ["gaussian", "cosine"] * 6

    def test_bandwidth_is_per_view_mean_distance(self):
        rng = np.random.default_rng(6)
        views = [rng.random((10, 3)), 5.0 * rng.random((10, 4))]
        bank = build_multi_view_bank(views)
        assert bank[0].params["delta"] == pytest.approx(mean_pairwise_distance(views[0]))
        assert bank[2].params["delta"] == pytest.approx(mean_pairwise_distance(views[1]))

    def test_single_view(self):
        rng = np.random.default_rng(7)
        bank = build_multi_view_bank([rng.random((8, 3)) + 0.1])
        assert [k.kind for k in bank] == ["gaussian", "cosine"]

    def test_mismatched_sample_counts_rejected(self):
        rng = np.random.default_rng(8)
        with pytest.raises(ValueError, match="samples"):
            build_multi_view_bank([rng.random((8, 3)), rng.random((9, 3))])


class TestZscore:
    def test_standardizes_columns(self):
        rng = np.random.default_rng(9)
        X = rng.random((50, 4)) * np.array([1.0, 10.0, 100.0, 0.5]) + 3.0
        Z = zscore(X)
        np.testing.assert_allclose(Z.mean(axis=0), 0.0, atol=1e-12)
        np.testing.assert_allclose(Z.std(axis=0), 1.0, rtol=1e-12)

    def test_constant_feature_survives(self):
        X = np.array([[1.0, 5.0], [2.0, 5.0], [3.0, 5.0]])
        Z = zscore(X)
        np.testing.assert_array_equal(Z[:, 1], 0.0)
        assert np.all(np.isfinite(Z))
