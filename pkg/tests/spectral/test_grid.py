import math

import numpy as np
import pytest

from ddmaxwell.exceptions import DDMaxwellUserError
from ddmaxwell.spectral import Grid


class TestGrid:
    def test_geometry(self, grid):
        assert grid.n == 32
        assert grid.spacing == pytest.approx(2 * math.pi / 32)
        assert grid.fundamental == pytest.approx(1.0)
        assert grid.nyquist_index == 16
        assert grid.dealias_radius == 10
        assert grid.spectral_shape == (32, 17)
        assert grid.k_max == pytest.approx(16 * math.sqrt(2))

    @pytest.mark.parametrize("n", [6, 7, 33, 0])
    def test_invalid_size(self, n):
        with pytest.raises(DDMaxwellUserError):
            Grid(n, 1.0)

    @pytest.mark.parametrize("length", [0.0, -1.0, math.inf, math.nan])
    def test_invalid_length(self, length):
        with pytest.raises(DDMaxwellUserError):
            Grid(16, length)

    def test_derivative_symbols_drop_nyquist(self, grid):
        k1, k2 = grid.derivative_symbols
        m1, m2 = grid.mode_numbers
        assert np.all(k1[np.abs(m1) == 16] == 0)
        assert np.all(k2[:, 16] == 0)
        assert np.max(np.abs(grid.wavenumbers[1][:, 16])) == pytest.approx(16.0)

    def test_interior_mask(self, grid):
        mask = grid.interior_mask
        assert mask[16].sum() == 0
        assert mask[:, 16].sum() == 0
        assert mask[0, 0] == 1.0
        assert mask.sum() == 31 * 16

    def test_plancherel_matches_quadrature(self, grid, rng):
        values = rng.standard_normal((32, 32))
        spectrum = np.fft.rfft2(values)
        assert grid.plancherel(np.abs(spectrum) ** 2) == pytest.approx(np.sum(values**2) * grid.cell_area)

    def test_grids_are_hashable(self):
        assert len({Grid(16, 1.0), Grid(16, 1.0), Grid(16, 2.0)}) == 2
