import numpy as np
import pytest

from ddmaxwell.spectral import band_limited_field, divergence2, divergence_free_field, sobolev_norm


class TestSampling:
    def test_band_limited_field(self, grid, rng):
        f = band_limited_field(grid, rng, radius=6.0, amplitude=2.5)
        assert f.mean == pytest.approx(0.0, abs=1e-14)
        assert sobolev_norm(f, 0) == pytest.approx(2.5)
        outside = grid.mode_magnitude > 6.0
        assert np.max(np.abs(f.spectrum[outside])) < 1e-10

    def test_default_radius_is_dealias_radius(self, grid, rng):
        f = band_limited_field(grid, rng)
        assert np.max(np.abs(f.spectrum[grid.mode_magnitude > grid.dealias_radius])) < 1e-10

    def test_seeded(self, grid):
        first = band_limited_field(grid, np.random.default_rng(5))
        second = band_limited_field(grid, np.random.default_rng(5))
        np.testing.assert_array_equal(first.values, second.values)

    def test_divergence_free_field(self, grid, rng):
        v = divergence_free_field(grid, rng, radius=8.0, amplitude=0.5)
        assert sobolev_norm(v, 0) == pytest.approx(0.5)
        np.testing.assert_allclose(divergence2(v).values, 0.0, atol=1e-12)
        for component in v:
            assert component.mean == pytest.approx(0.0, abs=1e-14)
