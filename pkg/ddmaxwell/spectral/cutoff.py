import math
from dataclasses import dataclass
from functools import lru_cache
from typing import overload

import numpy as np

from ddmaxwell.exceptions import DDMaxwellConfigError, DDMaxwellUserError
from ddmaxwell.spectral.fields import ScalarField, VectorField3
from ddmaxwell.spectral.grid import Grid
from ddmaxwell.type_alias import ComplexArray, RealArray


@dataclass(frozen=True)
class CutoffOperator:
    """
    Friedrichs projection ``J_n`` onto the closed frequency ball ``|m| <= radius``.

    The radius is counted in mode numbers: the physical wavenumber of mode ``m`` is ``2 pi m / L``.
    """

    radius: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.radius) and self.radius > 0):
            raise DDMaxwellUserError(f"Cutoff radius must be positive and finite, got {self.radius}.")

    def mask(self, grid: Grid) -> RealArray:
        return _ball_mask(grid, float(self.radius))

    def apply_spectrum(self, grid: Grid, spectrum: ComplexArray) -> ComplexArray:
        return spectrum * self.mask(grid)

    def physical_radius(self, grid: Grid) -> float:
        return self.radius * grid.fundamental

    def smoothing_factor(self, grid: Grid, s: float) -> float:
        """
        ``(1 + k_n)^s`` with ``k_n`` the physical radius: ``||J_n u||_{H^s}`` never exceeds this
        factor times ``||u||_{L^2}``
        """
        return (1.0 + self.physical_radius(grid)) ** s

    def validate(self, grid: Grid, dealias: bool = True) -> None:
        """
        :raises DDMaxwellConfigError: radius above Nyquist, or above ``N/3`` when ``dealias`` is set
        """
        if self.radius > grid.nyquist_index:
            raise DDMaxwellConfigError(
                f"cutoff radius {self.radius} exceeds the Nyquist index {grid.nyquist_index}", key="cutoff.n"
            )
        if dealias and self.radius > grid.dealias_radius:
            raise DDMaxwellConfigError(
                f"cutoff radius {self.radius} exceeds the de-aliasing limit N/3 = {grid.dealias_radius}",
                key="cutoff.n",
            )


@lru_cache(maxsize=64)
def _ball_mask(grid: Grid, radius: float) -> RealArray:
    mask = np.where(grid.mode_magnitude <= radius, 1.0, 0.0)
    mask.setflags(write=False)
    return mask


@overload
def apply_cutoff(op: CutoffOperator | None, f: ScalarField) -> ScalarField: ...
@overload
def apply_cutoff(op: CutoffOperator | None, f: VectorField3) -> VectorField3: ...
def apply_cutoff(op: CutoffOperator | None, f: ScalarField | VectorField3) -> ScalarField | VectorField3:
    """
    Zero every Fourier coefficient outside the ball and keep the others unchanged.
    ``op=None`` is the identity.
    """
    if op is None:
        return f
    if isinstance(f, VectorField3):
        return VectorField3.from_spectra(f.grid, op.apply_spectrum(f.grid, f.spectrum))
    return ScalarField.from_spectrum(f.grid, op.apply_spectrum(f.grid, f.spectrum))
