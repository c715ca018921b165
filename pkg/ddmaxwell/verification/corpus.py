"""Deterministic random corpora for the inequality checks and their calibration"""

import numpy as np

from ddmaxwell.constants import DEFAULT_CORPUS_SIZE, DEFAULT_SCALAR_SAMPLES
from ddmaxwell.dynamics import State
from ddmaxwell.spectral import (
    Grid,
    ScalarField,
    band_limited_field,
    divergence_free_field,
    solve_gauss_electric,
)
from ddmaxwell.type_alias import RealArray


def field_corpus(grid: Grid, seed: int, size: int = DEFAULT_CORPUS_SIZE) -> list[ScalarField]:
    """
    Zero-mean band-limited fields with random band radius (between 2 and ``N/3``) and spectral decay.
    """
    rng = np.random.default_rng(seed)
    top = max(2, grid.dealias_radius)
    return [
        band_limited_field(grid, rng, radius=float(rng.uniform(2.0, top)), decay=float(rng.uniform(0.0, 3.0)))
        for _ in range(size)
    ]


def state_corpus(grid: Grid, seed: int, size: int = 20, amplitude: float = 1.0) -> list[State]:
    """
    Gauss-compatible random states: ``E`` solves Gauss's law plus a divergence-free part,
    ``B`` is divergence-free
    """
    rng = np.random.default_rng(seed)
    states = []
    for _ in range(size):
        radius = float(rng.uniform(2.0, max(2, grid.dealias_radius)))
        rho = band_limited_field(grid, rng, radius=radius, amplitude=amplitude)
        transverse = divergence_free_field(grid, rng, radius=radius, amplitude=amplitude)
        electric = solve_gauss_electric(rho) + transverse
        magnetic = divergence_free_field(grid, rng, radius=radius, amplitude=amplitude)
        states.append(State(rho, electric, magnetic))
    return states


def scalar_samples(seed: int, size: int = DEFAULT_SCALAR_SAMPLES) -> RealArray:
    """
    Pairs ``(a, b)`` with ``a`` in ``[1, 1e6]`` and ``b`` in ``[0, 1e6]``: half uniform, half
    log-uniform so that small ``b`` is well represented; the boundary pairs ``(1, 0)`` and ``(1, 1)``
    are always included.
    """
    rng = np.random.default_rng(seed)
    half = size // 2
    a = np.concatenate([rng.uniform(1.0, 1e6, half), 10.0 ** rng.uniform(0.0, 6.0, size - half)])
    b = np.concatenate([rng.uniform(0.0, 1e6, half), 10.0 ** rng.uniform(-12.0, 6.0, size - half)])
    samples = np.column_stack([a, b])
    samples[:2] = [[1.0, 0.0], [1.0, 1.0]]
    return samples


def gaussian_bump(grid: Grid, width: float, center: tuple[float, float] | None = None) -> ScalarField:
    """``exp(-|x - c|^2 / (2 width^2))``, centered on the torus by default"""
    x1, x2 = grid.coordinates
    c1, c2 = center or (grid.domain_length / 2, grid.domain_length / 2)
    return ScalarField(grid, np.exp(-((x1 - c1) ** 2 + (x2 - c2) ** 2) / (2 * width**2)))
