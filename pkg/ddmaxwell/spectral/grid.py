import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from ddmaxwell.constants import DEALIAS_DIVISOR, MIN_POINTS_PER_AXIS
from ddmaxwell.exceptions import DDMaxwellUserError
from ddmaxwell.type_alias import RealArray


@dataclass(frozen=True)
class Grid:
    """
    Periodic lattice on the torus ``[0, L)^2`` and its discrete wavenumbers.

    Spectral arrays follow :py:func:`scipy.fft.rfft2`: shape ``(N, N // 2 + 1)``, axis 0 carries
    ``k1`` over all frequencies, axis 1 carries the non-negative ``k2``.

    :param points_per_axis: even number of points ``N`` (at least 8)
    :param domain_length: torus side ``L``
    """

    points_per_axis: int
    domain_length: float

    def __post_init__(self) -> None:
        n = self.points_per_axis
        if not isinstance(n, int | np.integer) or n < MIN_POINTS_PER_AXIS or n % 2:
            raise DDMaxwellUserError(f"Grid size must be an even integer >= {MIN_POINTS_PER_AXIS}, got {n}.")
        if not (math.isfinite(self.domain_length) and self.domain_length > 0):
            raise DDMaxwellUserError(f"Domain length must be positive, got {self.domain_length}.")

    @property
    def n(self) -> int:
        return int(self.points_per_axis)

    @property
    def spacing(self) -> float:
        return self.domain_length / self.n

    @property
    def cell_area(self) -> float:
        return self.spacing**2

    @property
    def fundamental(self) -> float:
        """physical wavenumber of the lowest mode, ``2 pi / L``"""
        return 2 * math.pi / self.domain_length

    @property
    def nyquist_index(self) -> int:
        return self.n // 2

    @property
    def dealias_radius(self) -> int:
        """largest Friedrichs radius (in mode numbers) for alias-free quadratic products"""
        return self.n // DEALIAS_DIVISOR

    @property
    def spectral_shape(self) -> tuple[int, int]:
        return self.n, self.n // 2 + 1

    @cached_property
    def coordinates(self) -> tuple[RealArray, RealArray]:
        x = np.arange(self.n) * self.spacing
        x1, x2 = np.meshgrid(x, x, indexing="ij")
        return x1, x2

    @cached_property
    def mode_numbers(self) -> tuple[RealArray, RealArray]:
        """integer frequencies ``(m1, m2)`` on the spectral layout"""
        m1 = np.fft.fftfreq(self.n, d=1.0 / self.n)
        m2 = np.fft.rfftfreq(self.n, d=1.0 / self.n)
        mm1, mm2 = np.meshgrid(m1, m2, indexing="ij")
        return mm1, mm2

    @cached_property
    def mode_magnitude(self) -> RealArray:
        m1, m2 = self.mode_numbers
        return np.sqrt(m1**2 + m2**2)

    @cached_property
    def wavenumbers(self) -> tuple[RealArray, RealArray]:
        """physical wavenumbers ``(k1, k2)``, Nyquist included (even-derivative use)"""
        m1, m2 = self.mode_numbers
        return m1 * self.fundamental, m2 * self.fundamental

    @cached_property
    def derivative_symbols(self) -> tuple[RealArray, RealArray]:
        """``(k1, k2)`` with the Nyquist frequency zeroed on each axis (odd-derivative use)"""
        k1, k2 = (k.copy() for k in self.wavenumbers)
        m1, m2 = self.mode_numbers
        k1[np.abs(m1) == self.nyquist_index] = 0.0
        k2[np.abs(m2) == self.nyquist_index] = 0.0
        return k1, k2

    @cached_property
    def interior_mask(self) -> RealArray:
        """1.0 off the Nyquist lines, 0.0 on them; the evolution lives on the interior modes"""
        m1, m2 = self.mode_numbers
        nyquist = (np.abs(m1) == self.nyquist_index) | (np.abs(m2) == self.nyquist_index)
        return np.where(nyquist, 0.0, 1.0)

    @cached_property
    def k_squared(self) -> RealArray:
        k1, k2 = self.wavenumbers
        return k1**2 + k2**2

    @cached_property
    def k_magnitude(self) -> RealArray:
        return np.sqrt(self.k_squared)

    @property
    def k_max(self) -> float:
        """largest physical wavenumber magnitude on the grid (the corner mode)"""
        return float(math.sqrt(2) * self.nyquist_index * self.fundamental)

    @cached_property
    def hermitian_weights(self) -> RealArray:
        """
        multiplicity of each half-spectrum column in the full spectrum, so that Plancherel sums
        over the half spectrum equal sums over all modes
        """
        weights = np.full(self.spectral_shape, 2.0)
        weights[:, 0] = 1.0
        weights[:, self.nyquist_index] = 1.0
        return weights

    def plancherel(self, spectrum_sq: RealArray) -> float:
        """
        Physical quadrature ``(L/N)^2 * sum |u|^2`` from squared spectral magnitudes.

        :param spectrum_sq: ``|u_hat|^2`` (possibly times a weight) on the half spectrum
        """
        total = float(np.sum(self.hermitian_weights * spectrum_sq))
        return total * self.cell_area / self.n**2
