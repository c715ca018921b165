import math

import numpy as np
import pytest

from ddmaxwell.exceptions import DDMaxwellConstraintError, DDMaxwellUserError
from ddmaxwell.spectral import (
    ScalarField,
    VectorField3,
    band_limited_field,
    gradient_l2,
    hessian_l2,
    integrate,
    lp_norm,
    sobolev_norm,
    vector_linf,
)
from ddmaxwell.spectral.norms import pad_spectrum, resample


@pytest.fixture(name="sine")
def fixture_sine(grid) -> ScalarField:
    x1, _ = grid.coordinates
    return ScalarField(grid, np.sin(x1))


class TestNorms:
    def test_single_mode_norms(self, sine):
        # int sin^2 = 2 pi^2 and int sin^4 = 3 pi^2 / 2 on the 2 pi torus
        assert lp_norm(sine, 2) == pytest.approx(math.pi * math.sqrt(2))
        assert lp_norm(sine, 4) == pytest.approx((1.5 * math.pi**2) ** 0.25)
        assert lp_norm(sine, math.inf) == pytest.approx(1.0)
        assert sobolev_norm(sine, 0) == pytest.approx(math.pi * math.sqrt(2))
        assert sobolev_norm(sine, 1) == pytest.approx(2 * math.pi)
        assert gradient_l2(sine) == pytest.approx(math.pi * math.sqrt(2))
        assert hessian_l2(sine) == pytest.approx(math.pi * math.sqrt(2))

    def test_higher_mode_derivative_norms(self, grid):
        x1, x2 = grid.coordinates
        f = ScalarField(grid, np.cos(3 * x1 + 4 * x2))
        assert gradient_l2(f) == pytest.approx(5 * sobolev_norm(f, 0))
        assert hessian_l2(f) == pytest.approx(25 * sobolev_norm(f, 0))

    def test_plancherel_matches_quadrature(self, grid, rng):
        f = ScalarField(grid, rng.standard_normal((32, 32)))
        assert sobolev_norm(f, 0) == pytest.approx(lp_norm(f, 2))

    def test_vector_norms(self, grid, sine):
        v = VectorField3((sine, sine, ScalarField.zeros(grid)))
        assert sobolev_norm(v, 0) == pytest.approx(2 * math.pi)
        assert vector_linf(v) == pytest.approx(math.sqrt(2))

    def test_negative_homogeneous_norm(self, grid, sine):
        assert sobolev_norm(sine, -1, homogeneous=True) == pytest.approx(math.pi * math.sqrt(2))
        with pytest.raises(DDMaxwellConstraintError):
            sobolev_norm(sine + ScalarField(grid, np.ones((32, 32))), -1, homogeneous=True)

    def test_invalid_arguments(self, sine):
        with pytest.raises(DDMaxwellUserError):
            lp_norm(sine, 3)
        with pytest.raises(DDMaxwellUserError):
            sobolev_norm(sine, -3)
        with pytest.raises(DDMaxwellUserError):
            lp_norm(sine, 2, oversample=0)
        with pytest.raises(DDMaxwellUserError):
            integrate()

    def test_integrate_product(self, grid, sine):
        x1, _ = grid.coordinates
        cosine = ScalarField(grid, np.cos(x1))
        assert integrate(sine, sine) == pytest.approx(2 * math.pi**2)
        assert integrate(sine, cosine) == pytest.approx(0.0, abs=1e-12)

    def test_oversampling_removes_aliasing(self, grid, rng):
        fields = [band_limited_field(grid, rng) for _ in range(4)]
        fine = integrate(*fields, oversample=4)
        assert integrate(*fields, oversample=2) == pytest.approx(fine, abs=1e-12)

    def test_resample_interpolates(self, grid, sine):
        fine = resample(sine, 2)
        x = np.arange(64) * (2 * math.pi / 64)
        np.testing.assert_allclose(fine, np.sin(x)[:, None] * np.ones((1, 64)), atol=1e-13)
        assert resample(sine, 1) is sine.values

    def test_pad_spectrum_shape(self, grid, sine):
        assert pad_spectrum(sine.spectrum, 32, 64).shape == (64, 33)
