import logging

import numpy as np

from ddmaxwell.dynamics import State, project_state
from ddmaxwell.enums import Preset
from ddmaxwell.formats.config import RunConfig
from ddmaxwell.spectral import (
    Grid,
    ScalarField,
    VectorField3,
    band_limited_field,
    divergence_free_field,
    solve_gauss_electric,
)
from ddmaxwell.verification.corpus import gaussian_bump

logger = logging.getLogger(__name__)


def _sup_scaled(f: ScalarField, amplitude: float) -> ScalarField:
    peak = float(np.max(np.abs(f.values)))
    return f if peak == 0.0 else f * (amplitude / peak)


def _vector_sup_scaled(v: VectorField3, amplitude: float) -> VectorField3:
    peak = float(np.sqrt(np.max(v.magnitude_sq())))
    return v if peak == 0.0 else v * (amplitude / peak)


def _zero_mean(f: ScalarField) -> ScalarField:
    return ScalarField(f.grid, f.values - f.mean)


def _density(cfg: RunConfig, grid: Grid, rng: np.random.Generator, radius: float) -> ScalarField:
    length = grid.domain_length
    if cfg.init_preset == Preset.DIPOLE:
        x1, _ = grid.coordinates
        rho = ScalarField(grid, np.sin(2 * np.pi * x1 / length) * gaussian_bump(grid, cfg.init_width).values)
    elif cfg.init_preset == Preset.GAUSSIAN_PAIR:
        offset = length / 8
        center = length / 2
        plus = gaussian_bump(grid, cfg.init_width, (center + offset, center))
        minus = gaussian_bump(grid, cfg.init_width, (center - offset, center))
        rho = plus - minus
    elif cfg.init_preset == Preset.BAND_LIMITED_RANDOM:
        rho = band_limited_field(grid, rng, radius=radius)
    elif cfg.init_preset == Preset.HEAT_ONLY:
        return _sup_scaled(gaussian_bump(grid, cfg.init_width), cfg.init_amplitude)
    else:
        return ScalarField.zeros(grid)
    return _sup_scaled(_zero_mean(rho), cfg.init_amplitude)


def build_initial_state(cfg: RunConfig) -> State:
    """
    Initial data of the configured preset, projected by ``J_n`` when a cutoff is set.

    * ``dipole``: ``rho = sin(2 pi x1 / L)`` times a Gaussian of width ``init.width``
    * ``gaussian_pair``: two Gaussians of opposite sign, ``L/4`` apart
    * ``band_limited_random``: random band-limited ``rho`` and a random divergence-free part of ``E``
    * ``maxwell_only``: ``rho = 0``, divergence-free ``E``
    * ``heat_only``: a positive Gaussian density and no field, for the decoupled heat flow

    ``rho`` is scaled to sup norm ``init.amplitude``, ``E`` solves Gauss's law (plus the random
    part), ``B`` is the curl of a random potential scaled to sup norm ``init.amplitude``.
    The random draws only depend on ``init.seed``.

    :param cfg: validated run configuration
    :return: state at ``t = 0``
    """
    grid = cfg.grid
    rng = np.random.default_rng(cfg.init_seed)
    radius = cfg.cutoff_n if cfg.cutoff_n is not None else max(2.0, grid.dealias_radius / 2)
    preset = cfg.init_preset
    rho = _density(cfg, grid, rng, radius)

    if preset == Preset.HEAT_ONLY:
        state = State(rho, VectorField3.zeros(grid), VectorField3.zeros(grid), constrained=False)
    else:
        electric = solve_gauss_electric(rho)
        if preset in (Preset.BAND_LIMITED_RANDOM, Preset.MAXWELL_ONLY):
            electric = electric + _vector_sup_scaled(
                divergence_free_field(grid, rng, radius=radius), cfg.init_amplitude
            )
        magnetic = _vector_sup_scaled(divergence_free_field(grid, rng, radius=radius), cfg.init_amplitude)
        state = State(rho, electric, magnetic)
    logger.info(
        f"Initial state: preset={preset.value}, seed={cfg.init_seed}, amplitude={cfg.init_amplitude:g}"
    )
    return project_state(state, cfg.cutoff)
