import numpy as np

from ddmaxwell.helpers import backward
from ddmaxwell.spectral.fields import ScalarField, VectorField3
from ddmaxwell.spectral.grid import Grid
from ddmaxwell.spectral.norms import sobolev_norm
from ddmaxwell.spectral.operators import curl_spectrum
from ddmaxwell.type_alias import ComplexArray


def band_limited_spectrum(
    grid: Grid, rng: np.random.Generator, radius: float, decay: float = 1.0
) -> ComplexArray:
    """
    Random half spectrum supported on ``0 < |m| <= radius`` away from the Nyquist lines,
    with amplitudes decaying like ``(1 + |m|^2)^{-decay/2}``.
    """
    shape = grid.spectral_shape
    coefficients = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    magnitude = grid.mode_magnitude
    support = (magnitude <= radius) & (magnitude > 0)
    envelope = np.where(support, (1.0 + magnitude**2) ** (-decay / 2), 0.0) * grid.interior_mask
    return coefficients * envelope


def band_limited_field(
    grid: Grid,
    rng: np.random.Generator,
    radius: float | None = None,
    amplitude: float = 1.0,
    decay: float = 1.0,
) -> ScalarField:
    """
    Zero-mean random field band-limited to the ball ``|m| <= radius``, scaled to ``L^2`` norm ``amplitude``

    :param radius: mode-number radius, defaults to the de-aliasing radius ``N/3``
    """
    radius = grid.dealias_radius if radius is None else radius
    # a round trip through physical space restores Hermitian symmetry on the k2 = 0 column
    field = ScalarField(grid, backward(band_limited_spectrum(grid, rng, radius, decay), grid.n))
    norm = sobolev_norm(field, 0)
    if norm == 0.0:
        return field
    return field * (amplitude / norm)


def divergence_free_field(
    grid: Grid,
    rng: np.random.Generator,
    radius: float | None = None,
    amplitude: float = 1.0,
) -> VectorField3:
    """Curl of a random band-limited vector potential, so its planar divergence vanishes identically"""
    radius = grid.dealias_radius if radius is None else radius
    potential = np.stack([band_limited_spectrum(grid, rng, radius) for _ in range(3)])
    field = VectorField3.from_spectra(grid, curl_spectrum(grid, potential))
    norm = sobolev_norm(field, 0)
    if norm == 0.0:
        return field
    return field * (amplitude / norm)
