import math

import numpy as np

from ddmaxwell.constants import ZERO_MEAN_TOLERANCE
from ddmaxwell.exceptions import DDMaxwellConstraintError, DDMaxwellUserError
from ddmaxwell.helpers import backward
from ddmaxwell.spectral.fields import Field, ScalarField, VectorField3, require_finite
from ddmaxwell.spectral.grid import Grid
from ddmaxwell.type_alias import ComplexArray, RealArray

SUPPORTED_P = (2, 4, math.inf)


def pad_spectrum(spectrum: ComplexArray, n: int, m: int) -> ComplexArray:
    """
    Embed an ``n``-grid half spectrum into an ``m``-grid one (``m >= n``), splitting the Nyquist
    coefficients symmetrically so the trigonometric interpolant stays real.
    The result is scaled for the unnormalized transforms of :py:mod:`ddmaxwell.helpers`.
    """
    h = n // 2
    rows = np.zeros((m,) + spectrum.shape[1:], dtype=np.complex128)
    rows[:h] = spectrum[:h]
    rows[m - h + 1 :] = spectrum[h + 1 :]
    rows[h] = 0.5 * spectrum[h]
    rows[m - h] += 0.5 * spectrum[h]

    padded = np.zeros((m, m // 2 + 1), dtype=np.complex128)
    padded[:, :h] = rows[:, :h]
    padded[:, h] = 0.5 * rows[:, h]
    return padded * (m / n) ** 2


def resample(f: ScalarField, factor: int) -> RealArray:
    """Samples of the trigonometric interpolant of ``f`` on a grid ``factor`` times finer"""
    if factor == 1:
        return f.values
    m = f.grid.n * factor
    return backward(pad_spectrum(f.spectrum, f.grid.n, m), m)


def _check_oversample(oversample: int) -> None:
    if not isinstance(oversample, int) or oversample < 1:
        raise DDMaxwellUserError(f"oversample must be a positive integer, got {oversample!r}.")


def integrate(*fields: ScalarField, oversample: int = 1) -> float:
    """
    Grid quadrature of the pointwise product of ``fields`` over the torus.

    :param oversample: evaluate the product on a grid refined by this factor (zero padding);
        ``2`` removes the aliasing error of cubic products of fields band-limited to ``N/3``
    """
    if not fields:
        raise DDMaxwellUserError("integrate needs at least one field.")
    _check_oversample(oversample)
    grid = fields[0].grid
    product = np.ones((grid.n * oversample,) * 2)
    for f in fields:
        if f.grid != grid:
            raise DDMaxwellUserError("integrate called with fields on different grids.")
        product = product * resample(f, oversample)
    cell = (grid.domain_length / (grid.n * oversample)) ** 2
    return float(np.sum(product)) * cell


def lp_norm(f: ScalarField, p: float, oversample: int = 1) -> float:
    """
    ``L^p`` norm on the torus for ``p`` in ``{2, 4, inf}``

    :raises DDMaxwellUserError: for any other ``p`` or non-finite ``f``
    """
    if p not in SUPPORTED_P:
        raise DDMaxwellUserError(f"Unsupported p={p!r}, expected one of 2, 4, inf.")
    require_finite(f)
    _check_oversample(oversample)
    values = resample(f, oversample)
    if p == math.inf:
        return float(np.max(np.abs(values))) if values.size else 0.0
    cell = (f.grid.domain_length / (f.grid.n * oversample)) ** 2
    return float((np.sum(np.abs(values) ** p) * cell) ** (1.0 / p))


def vector_linf(v: VectorField3) -> float:
    """sup of the Euclidean length ``|v(x)|``"""
    return float(np.sqrt(np.max(v.magnitude_sq())))


def _sobolev_weight(grid: Grid, s: float, homogeneous: bool) -> RealArray:
    if not homogeneous:
        return (1.0 + grid.k_squared) ** s
    k_sq = grid.k_squared
    safe = np.where(k_sq > 0, k_sq, 1.0)
    weight = safe**s
    weight[k_sq == 0] = 1.0 if s == 0 else 0.0
    return weight


def sobolev_norm(f: Field, s: float, homogeneous: bool = False) -> float:
    """
    Sobolev norm by Plancherel; ``s = 0`` reproduces the grid quadrature ``L^2`` norm.

    :param f: scalar or vector field (vector norms are the root-sum-of-squares of components)
    :param s: order, ``s >= -2``
    :param homogeneous: weight ``|k|^{2s}`` instead of ``(1 + |k|^2)^s``
    :raises DDMaxwellConstraintError: homogeneous negative order on a field with nonzero mean
    """
    if s < -2:
        raise DDMaxwellUserError(f"Sobolev order must be >= -2, got {s}.")
    require_finite(f)
    if isinstance(f, VectorField3):
        return math.sqrt(sum(sobolev_norm(c, s, homogeneous) ** 2 for c in f))

    if homogeneous and s < 0:
        scale = max(1.0, float(np.max(np.abs(f.values))))
        if abs(f.mean) > ZERO_MEAN_TOLERANCE * scale:
            raise DDMaxwellConstraintError(
                f"Homogeneous norm of order {s} undefined for a field with mean {f.mean:.6e}."
            )
    weight = _sobolev_weight(f.grid, s, homogeneous)
    return math.sqrt(f.grid.plancherel(weight * np.abs(f.spectrum) ** 2))


def gradient_l2(f: Field) -> float:
    """``||grad f||_{L^2}``"""
    return sobolev_norm(f, 1, homogeneous=True)


def hessian_l2(f: Field) -> float:
    """``||grad^2 f||_{L^2}``, equal to ``|| |k|^2 f_hat ||`` by Plancherel"""
    return sobolev_norm(f, 2, homogeneous=True)
