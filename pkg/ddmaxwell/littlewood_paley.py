"""
Dyadic (Littlewood-Paley) frequency decomposition on the periodic grid and the logarithmic
``L^inf`` interpolation bound built on it.

Multipliers are evaluated at physical wavenumbers ``|k|``. The low-frequency part is
``S_1 u`` (multiplier ``chi(|k|/2)``), the blocks are ``Delta_q u`` (multiplier ``phi(|k|/2^q)``)
for ``q = 1..Q`` where ``2^Q`` is the first power of two above the largest grid wavenumber.
"""

import logging
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ddmaxwell.constants import FILTER_PROFILE_VERSION
from ddmaxwell.exceptions import DDMaxwellUserError
from ddmaxwell.helpers import trapezoid
from ddmaxwell.models import InterpolationBound, LogBound, TrajectoryRecord
from ddmaxwell.spectral import Grid, ScalarField, gradient_l2, hessian_l2, lp_norm, sobolev_norm
from ddmaxwell.type_alias import RealArray

logger = logging.getLogger(__name__)

SMOOTHSTEP_DEGREES = {1: "cubic", 2: "quintic"}


def smoothstep(t: RealArray, smoothness: int) -> RealArray:
    """Polynomial ramp from 0 to 1 on ``[0, 1]`` whose first ``smoothness`` derivatives vanish at both ends"""
    t = np.clip(t, 0.0, 1.0)
    if smoothness == 1:
        return t * t * (3.0 - 2.0 * t)
    return t**3 * (t * (6.0 * t - 15.0) + 10.0)


@dataclass(frozen=True)
class DyadicFilterBank:
    """
    Radial profiles ``chi`` and ``phi = chi(./2) - chi``.

    ``chi`` equals 1 on ``|xi| <= 1/2``, vanishes for ``|xi| >= 1`` and interpolates with a
    smoothstep in between. The kernels ``F^{-1} chi`` and ``F^{-1} phi`` are never formed.

    :param smoothness: 1 for the cubic ramp (C^1), 2 for the quintic ramp (C^2)
    """

    smoothness: int = 2
    version: str = FILTER_PROFILE_VERSION

    def chi(self, r: RealArray | float) -> RealArray:
        r = np.asarray(r, dtype=np.float64)
        return smoothstep(2.0 * (1.0 - r), self.smoothness)

    def phi(self, r: RealArray | float) -> RealArray:
        r = np.asarray(r, dtype=np.float64)
        return self.chi(r / 2.0) - self.chi(r)

    def block_multiplier(self, grid: Grid, q: int) -> RealArray:
        return _multiplier(self, grid, "phi", q)

    def low_multiplier(self, grid: Grid, q: int) -> RealArray:
        return _multiplier(self, grid, "chi", q)


@lru_cache(maxsize=256)
def _multiplier(bank: DyadicFilterBank, grid: Grid, kind: str, q: int) -> RealArray:
    radius = grid.k_magnitude / 2.0**q
    values = bank.phi(radius) if kind == "phi" else bank.chi(radius)
    values.setflags(write=False)
    return values


def build_filter_bank(smoothness: int = 2) -> DyadicFilterBank:
    """
    :param smoothness: 1 (cubic smoothstep) or 2 (quintic smoothstep, default)
    :raises DDMaxwellUserError: for any other value
    """
    if smoothness not in SMOOTHSTEP_DEGREES:
        raise DDMaxwellUserError(f"smoothness must be one of {sorted(SMOOTHSTEP_DEGREES)}, got {smoothness}.")
    return DyadicFilterBank(smoothness=smoothness)


def q_max(grid: Grid) -> int:
    """number of dyadic blocks ``Q`` needed to cover every grid wavenumber"""
    return max(0, math.ceil(math.log2(grid.k_max)))


def ring(q: int) -> tuple[float, float]:
    """physical wavenumber interval on which ``Delta_q`` can be nonzero"""
    return 2.0 ** (q - 1), 2.0 ** (q + 1)


def block(u: ScalarField, q: int, bank: DyadicFilterBank) -> ScalarField:
    """
    ``Delta_q u``, the spectral multiplication by ``phi(|k| / 2^q)``.

    A ring that contains no grid wavenumber yields a zero field and a warning.

    :raises DDMaxwellUserError: if ``q`` is negative
    """
    if q < 0:
        raise DDMaxwellUserError(f"Block index must be non-negative, got {q}.")
    multiplier = bank.block_multiplier(u.grid, q)
    if not np.any(multiplier):
        low, high = ring(q)
        logger.warning(f"Dyadic block q={q} is empty on this grid (ring [{low:g}, {high:g}]).")
        return ScalarField.zeros(u.grid)
    return ScalarField.from_spectrum(u.grid, multiplier * u.spectrum)


def low_pass(u: ScalarField, q: int, bank: DyadicFilterBank) -> ScalarField:
    """``S_q u``, the spectral multiplication by ``chi(|k| / 2^q)``"""
    if q < 0:
        raise DDMaxwellUserError(f"Low-pass index must be non-negative, got {q}.")
    multiplier = bank.low_multiplier(u.grid, q)
    if not np.any(multiplier):
        logger.warning(f"Low-pass S_{q} keeps no grid wavenumber.")
        return ScalarField.zeros(u.grid)
    return ScalarField.from_spectrum(u.grid, multiplier * u.spectrum)


@dataclass
class DyadicDecomposition:
    """``u = S_1 u + sum_{q=1}^{Q} Delta_q u``"""

    low: ScalarField
    blocks: list[ScalarField]
    q_max: int

    @property
    def grid(self) -> Grid:
        return self.low.grid


def decompose(u: ScalarField, bank: DyadicFilterBank) -> DyadicDecomposition:
    top = q_max(u.grid)
    blocks = [
        ScalarField.from_spectrum(u.grid, bank.block_multiplier(u.grid, q) * u.spectrum)
        for q in range(1, top + 1)
    ]
    return DyadicDecomposition(low=low_pass(u, 1, bank), blocks=blocks, q_max=top)


def reconstruct(d: DyadicDecomposition) -> ScalarField:
    values = d.low.values.copy()
    for b in d.blocks:
        values += b.values
    return ScalarField(d.grid, values)


def block_table(u: ScalarField, bank: DyadicFilterBank) -> list[dict[str, float]]:
    """
    Norms of every piece of the decomposition; the ``S_1`` row carries ``q = 0`` and the ring
    ``[0, 2]``.
    """
    d = decompose(u, bank)
    pieces = [(0, (0.0, 2.0), d.low)] + [(q, ring(q), b) for q, b in enumerate(d.blocks, start=1)]
    return [
        {
            "q": float(q),
            "ring_low": low,
            "ring_high": high,
            "l2": sobolev_norm(piece, 0),
            "linf": lp_norm(piece, math.inf),
            "grad_l2": gradient_l2(piece),
        }
        for q, (low, high), piece in pieces
    ]


def optimal_truncation(u: ScalarField) -> int:
    """
    Truncation level balancing the two high-frequency terms of the interpolation bound,
    ``round(log2(e + ||grad^2 u|| / ||grad u||))`` clamped to ``[1, Q]``; 1 when ``grad u = 0``.
    """
    return truncation_level(gradient_l2(u), hessian_l2(u), q_max(u.grid))


def truncation_level(grad_l2: float, hess_l2: float, top: int) -> int:
    """:py:func:`optimal_truncation` from precomputed norms and the level cap ``top``"""
    if grad_l2 == 0.0:
        return 1
    level = round(math.log2(math.e + hess_l2 / grad_l2))
    return int(min(max(level, 1), max(top, 1)))


def linf_interpolation_bound(u: ScalarField, trunc_n: int, bank: DyadicFilterBank) -> InterpolationBound:
    """
    Both sides of ``||u||_inf <= C (||u||_2 + N ||grad u||_2 + 2^-N ||grad^2 u||_2)``.

    ``block_sum`` is ``||S_1 u||_inf + sum_q ||Delta_q u||_inf``, which bounds ``||u||_inf``
    with constant 1.
    """
    d = decompose(u, bank)
    block_sum = lp_norm(d.low, math.inf) + sum(lp_norm(b, math.inf) for b in d.blocks)
    return InterpolationBound(
        lhs=lp_norm(u, math.inf),
        l2=sobolev_norm(u, 0),
        grad_term=trunc_n * gradient_l2(u),
        hess_term=2.0**-trunc_n * hessian_l2(u),
        block_sum=block_sum,
    )


def trajectory_log_bound(traj: TrajectoryRecord, c0: float, t: float, constant: float = 1.0) -> LogBound:
    """
    Both sides of the time-integrated logarithmic bound
    ``||rho||_{L^1_t L^inf} <= (C0 T)^{1/2} + C T^{1/2} g log(e + h / g)``
    with ``g, h`` the ``L^2_{t,x}`` norms of ``grad rho`` and ``grad^2 rho``.

    :param c0: growth constant of the run
    :param t: horizon ``T``
    :param constant: the constant ``C`` in front of the logarithmic term
    :raises DDMaxwellUserError: on an empty trajectory
    """
    if len(traj) == 0:
        raise DDMaxwellUserError("trajectory_log_bound needs a non-empty trajectory.")
    times = traj.times
    lhs = trapezoid(traj.column("linf_rho"), times)
    grad = math.sqrt(trapezoid(traj.column("grad_rho_l2") ** 2, times))
    hess = math.sqrt(trapezoid(traj.column("hess_rho_l2") ** 2, times))
    rhs = math.sqrt(c0 * t)
    if grad > 0.0:
        rhs += constant * math.sqrt(t) * grad * math.log(math.e + hess / grad)
    return LogBound(lhs=lhs, rhs=rhs, grad_l2t=grad, hess_l2t=hess)
