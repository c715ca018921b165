"""Spectral differential operators; every operator is a Fourier multiplier"""

import numpy as np

from ddmaxwell.constants import ZERO_MEAN_TOLERANCE
from ddmaxwell.exceptions import DDMaxwellConstraintError
from ddmaxwell.spectral.fields import ScalarField, VectorField3, require_finite
from ddmaxwell.spectral.grid import Grid
from ddmaxwell.type_alias import ComplexArray


def gradient_spectrum(grid: Grid, spectrum: ComplexArray) -> ComplexArray:
    """``(i k1 u, i k2 u)`` stacked on a new leading axis"""
    k1, k2 = grid.derivative_symbols
    return np.stack([1j * k1 * spectrum, 1j * k2 * spectrum])


def divergence_spectrum(grid: Grid, spectra: ComplexArray) -> ComplexArray:
    """``i k1 v1 + i k2 v2`` for stacked spectra ``v`` (extra components ignored)"""
    k1, k2 = grid.derivative_symbols
    return 1j * k1 * spectra[0] + 1j * k2 * spectra[1]


def curl_spectrum(grid: Grid, spectra: ComplexArray) -> ComplexArray:
    """``(d2 v3, -d1 v3, d1 v2 - d2 v1)`` for stacked spectra of a 3-vector"""
    k1, k2 = grid.derivative_symbols
    v1, v2, v3 = spectra[0], spectra[1], spectra[2]
    return np.stack([1j * k2 * v3, -1j * k1 * v3, 1j * k1 * v2 - 1j * k2 * v1])


def _planar(grid: Grid, s1: ComplexArray, s2: ComplexArray) -> VectorField3:
    first, second = ScalarField.from_spectrum(grid, s1), ScalarField.from_spectrum(grid, s2)
    return VectorField3((first, second, ScalarField.zeros(grid)))


def gradient3(f: ScalarField) -> VectorField3:
    """
    Gradient embedded in R^3 as ``(d1 f, d2 f, 0)``

    :raises DDMaxwellUserError: if ``f`` is not finite
    """
    require_finite(f)
    grid = f.grid
    g1, g2 = gradient_spectrum(grid, f.spectrum)
    return _planar(grid, g1, g2)


def divergence2(v: VectorField3) -> ScalarField:
    """Planar divergence ``d1 v1 + d2 v2``; the third component is ignored"""
    require_finite(v)
    return ScalarField.from_spectrum(v.grid, divergence_spectrum(v.grid, v.spectrum))


def curl3(v: VectorField3) -> VectorField3:
    """Curl of a 3-vector field that does not depend on ``x3``"""
    require_finite(v)
    return VectorField3.from_spectra(v.grid, curl_spectrum(v.grid, v.spectrum))


def laplacian(f: ScalarField) -> ScalarField:
    """Multiplication by ``-|k|^2``"""
    require_finite(f)
    return ScalarField.from_spectrum(f.grid, -f.grid.k_squared * f.spectrum)


def check_zero_mean(rho: ScalarField, name: str = "rho") -> None:
    """
    :raises DDMaxwellConstraintError: if the mean of ``rho`` is not zero up to
        :py:data:`~ddmaxwell.constants.ZERO_MEAN_TOLERANCE` (relative to its sup norm, at least 1)
    """
    scale = max(1.0, float(np.max(np.abs(rho.values))))
    if abs(rho.mean) > ZERO_MEAN_TOLERANCE * scale:
        raise DDMaxwellConstraintError(
            f"{name} must have zero mean on the torus for div E = rho to be solvable, mean is {rho.mean:.6e}."
        )


def solve_gauss_electric(rho: ScalarField) -> VectorField3:
    """
    Curl-free electric field with ``div E = rho``, ``E = grad(inverse laplacian of rho)``

    :param rho: zero-mean charge density
    :return: ``(E1, E2, 0)``
    :raises DDMaxwellConstraintError: if ``rho`` has nonzero mean
    """
    require_finite(rho, "rho")
    check_zero_mean(rho)
    grid = rho.grid
    k1, k2 = grid.derivative_symbols
    k_sq = k1**2 + k2**2
    safe = np.where(k_sq > 0, k_sq, 1.0)
    potential = np.where(k_sq > 0, -rho.spectrum / safe, 0.0)
    e1, e2 = gradient_spectrum(grid, potential)
    return _planar(grid, e1, e2)
