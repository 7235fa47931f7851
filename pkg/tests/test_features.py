"""Filter bank, stacked patch features, and the PCA projection."""

import numpy as np
import pytest

from ddsr import (
    ConfigurationError,
    DimensionError,
    FeaturePipeline,
    FilterBank,
    PcaProjection,
    default_filter_bank,
    extract_patches,
    filter_image,
    fit_pca,
    project,
    raw_features,
    stacked_filter_patches,
)


class TestFilterBank:
    def test_default_bank_kernels(self):
        bank = default_filter_bank()
        assert len(bank.kernels) == 4
        np.testing.assert_array_equal(bank.kernels[0], [[1.0, 0.0, -1.0]])
        np.testing.assert_array_equal(bank.kernels[1], [[1.0], [0.0], [-1.0]])
        np.testing.assert_array_equal(bank.kernels[2], [[0.5, 0.0, -1.0, 0.0, 0.5]])
        np.testing.assert_array_equal(bank.kernels[3], [[0.5], [0.0], [-1.0], [0.0], [0.5]])

    def test_all_kernels_zero_dc(self):
        for k in default_filter_bank().kernels:
            assert abs(k.sum()) <= 1e-15

    def test_dc_kernel_rejected(self):
        with pytest.raises(ConfigurationError):
            FilterBank(kernels=[np.array([[0.25, 0.5, 0.25]])])

    def test_empty_bank_rejected(self):
        with pytest.raises(ConfigurationError):
            FilterBank(kernels=[])


class TestFilterImage:
    def test_ramp_gradient_oracle(self):
        # img(r, c) = c convolved (true convolution) with [1, 0, -1]:
        # out(c) = img(c+1) - img(c-1) = 2 away from the borders.
        img = np.tile(np.arange(12.0), (6, 1))
        out = filter_image(img, FilterBank(kernels=[np.array([[1.0, 0.0, -1.0]])]))[0]
        np.testing.assert_allclose(out[:, 1:-1], 2.0, atol=1e-14)

    def test_flat_image_zero_response(self):
        img = np.full((10, 10), 0.7)
        for f in filter_image(img, default_filter_bank()):
            np.testing.assert_allclose(f, 0.0, atol=1e-14)

    def test_output_shapes_match(self, rng):
        img = rng.random((11, 14))
        for f in filter_image(img, default_filter_bank()):
            assert f.shape == img.shape

    def test_vertical_is_transpose_of_horizontal(self, rng):
        img = rng.random((10, 10))
        bank = default_filter_bank()
        horiz = filter_image(img.T, FilterBank(kernels=[bank.kernels[0]]))[0]
        vert = filter_image(img, FilterBank(kernels=[bank.kernels[1]]))[0]
        np.testing.assert_allclose(vert, horiz.T, atol=1e-14)


class TestStackedFeatures:
    def test_dimensions(self, rng):
        img = rng.random((20, 20))
        feats = stacked_filter_patches(img, default_filter_bank(), 9, 8)
        assert feats.shape == (4 * 81, 9)

    def test_blocks_in_kernel_order(self, rng):
        img = rng.random((20, 20))
        bank = default_filter_bank()
        feats = stacked_filter_patches(img, bank, 9, 8)
        for i, k in enumerate(bank.kernels):
            single = stacked_filter_patches(img, FilterBank(kernels=[k]), 9, 8)
            np.testing.assert_array_equal(feats[i * 81 : (i + 1) * 81], single)

    def test_origins_match_patch_grid(self, rng):
        # feature column k must describe the same window as patch column k
        img = rng.random((20, 20))
        bank = FilterBank(kernels=[np.array([[1.0, 0.0, -1.0]])])
        feats = stacked_filter_patches(img, bank, 9, 8)
        filtered = filter_image(img, bank)[0]
        grid = extract_patches(filtered, 9, 8)
        np.testing.assert_array_equal(feats, grid.patches)


class TestFitPca:
    def test_matches_eigendecomposition_oracle(self, rng):
        x = rng.standard_normal((6, 300))
        x = np.diag([5.0, 3.0, 2.0, 0.5, 0.1, 0.01]) @ x
        pca = fit_pca(x, 0.99)
        # independent oracle via SVD of the centered data matrix
        centered = x - x.mean(axis=1, keepdims=True)
        u, s, _ = np.linalg.svd(centered, full_matrices=False)
        var = s**2 / (x.shape[1] - 1)
        d = int(np.searchsorted(np.cumsum(var), 0.99 * var.sum()) + 1)
        assert pca.reduced_dim == d
        # same subspace: projection operators agree
        p_ours = pca.basis.T @ pca.basis
        p_ref = u[:, :d] @ u[:, :d].T
        np.testing.assert_allclose(p_ours, p_ref, atol=1e-8)

    def test_energy_quota_met(self, rng):
        x = rng.standard_normal((10, 500)) * np.linspace(3, 0.1, 10)[:, None]
        for quota in (0.5, 0.9, 0.999):
            pca = fit_pca(x, quota)
            centered = x - x.mean(axis=1, keepdims=True)
            var = np.linalg.svd(centered, compute_uv=False) ** 2
            kept = var[: pca.reduced_dim].sum()
            assert kept / var.sum() >= quota * (1 - 1e-9)
            # and one dimension fewer would fall short
            if pca.reduced_dim > 1:
                assert var[: pca.reduced_dim - 1].sum() / var.sum() < quota

    def test_mean_projects_to_zero(self, rng):
        x = rng.random((8, 50)) + 2.0
        pca = fit_pca(x, 0.9)
        np.testing.assert_allclose(project(x.mean(axis=1), pca), 0.0, atol=1e-12)

    def test_uncentered_keeps_zero_at_zero(self, rng):
        x = rng.random((8, 50)) + 2.0
        pca = fit_pca(x, 0.9, center=False)
        np.testing.assert_array_equal(pca.mean, np.zeros(8))
        np.testing.assert_array_equal(project(np.zeros(8), pca), 0.0)

    def test_full_energy_keeps_rank(self, rng):
        x = rng.standard_normal((5, 100))
        pca = fit_pca(x, 1.0)
        assert pca.reduced_dim == 5

    def test_at_least_one_dimension(self):
        x = np.zeros((4, 10))
        pca = fit_pca(x, 0.999)
        assert pca.reduced_dim == 1

    def test_deterministic_signs(self, rng):
        x = rng.standard_normal((6, 200))
        a = fit_pca(x, 0.95)
        b = fit_pca(x.copy(), 0.95)
        np.testing.assert_array_equal(a.basis, b.basis)
        for row in a.basis:
            assert row[np.argmax(np.abs(row))] > 0

    def test_rejects_bad_input(self):
        with pytest.raises(ConfigurationError):
            fit_pca(np.zeros((4, 1)), 0.9)
        with pytest.raises(ConfigurationError):
            fit_pca(np.zeros((4, 10)), 0.0)
        with pytest.raises(ConfigurationError):
            fit_pca(np.zeros((4, 10)), 1.5)


class TestProject:
    def test_reduces_dimension(self, rng):
        x = rng.standard_normal((12, 100)) * np.linspace(2, 0.01, 12)[:, None]
        pca = fit_pca(x, 0.9)
        out = project(x, pca)
        assert out.shape == (pca.reduced_dim, 100)

    def test_single_vector(self, rng):
        x = rng.standard_normal((12, 100))
        pca = fit_pca(x, 0.9)
        vec = project(x[:, 0], pca)
        assert vec.shape == (pca.reduced_dim,)
        # batched and single paths may differ by an ulp (different BLAS kernels)
        np.testing.assert_allclose(vec, project(x, pca)[:, 0], rtol=0, atol=1e-12)

    def test_dim_mismatch(self, rng):
        pca = fit_pca(rng.standard_normal((6, 50)), 0.9)
        with pytest.raises(DimensionError):
            project(np.zeros(7), pca)


class TestPipelineDataclass:
    def test_dim_consistency_enforced(self, rng):
        pca = fit_pca(rng.standard_normal((4 * 81, 90)), 0.999)
        FeaturePipeline(bank=default_filter_bank(), pca=pca, patch_size=9, stride=8)
        with pytest.raises(DimensionError):
            FeaturePipeline(bank=default_filter_bank(), pca=pca, patch_size=7, stride=8)

    def test_raw_features_delegate(self, rng):
        img = rng.random((20, 20))
        bank = default_filter_bank()
        pca = fit_pca(rng.standard_normal((4 * 81, 90)), 0.999)
        pipe = FeaturePipeline(bank=bank, pca=pca, patch_size=9, stride=8)
        np.testing.assert_array_equal(
            raw_features(img, pipe), stacked_filter_patches(img, bank, 9, 8)
        )

    def test_orthonormality_enforced(self):
        with pytest.raises(ConfigurationError):
            PcaProjection(mean=np.zeros(3), basis=np.array([[1.0, 1.0, 0.0]]), energy_kept=0.9)
