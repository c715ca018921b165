from collections.abc import Iterator
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from ddmaxwell.exceptions import DDMaxwellUserError
from ddmaxwell.helpers import backward, forward
from ddmaxwell.spectral.grid import Grid
from ddmaxwell.type_alias import ComplexArray, RealArray


def _frozen(values: RealArray) -> RealArray:
    array = np.array(values, dtype=np.float64, copy=True)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class ScalarField:
    """
    Real scalar field sampled on a :py:class:`Grid`.

    The values are copied and made read-only on construction; the spectral representation is
    computed lazily and cached.
    """

    grid: Grid
    values: RealArray

    def __post_init__(self) -> None:
        values = np.asarray(self.values)
        if values.shape != (self.grid.n, self.grid.n):
            raise DDMaxwellUserError(
                f"Field shape {values.shape} does not match grid {self.grid.n}x{self.grid.n}."
            )
        if np.iscomplexobj(values):
            raise DDMaxwellUserError("Field values must be real.")
        object.__setattr__(self, "values", _frozen(values))

    @classmethod
    def zeros(cls, grid: Grid) -> "ScalarField":
        return cls(grid, np.zeros((grid.n, grid.n)))

    @classmethod
    def from_spectrum(cls, grid: Grid, spectrum: ComplexArray) -> "ScalarField":
        return cls(grid, backward(spectrum, grid.n))

    @cached_property
    def spectrum(self) -> ComplexArray:
        return forward(self.values)

    @property
    def mean(self) -> float:
        return float(np.mean(self.values))

    @property
    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.values)))

    def __add__(self, other: "ScalarField") -> "ScalarField":
        _same_grid(self.grid, other.grid)
        return ScalarField(self.grid, self.values + other.values)

    def __sub__(self, other: "ScalarField") -> "ScalarField":
        _same_grid(self.grid, other.grid)
        return ScalarField(self.grid, self.values - other.values)

    def __mul__(self, factor: float) -> "ScalarField":
        return ScalarField(self.grid, self.values * factor)

    __rmul__ = __mul__

    def __neg__(self) -> "ScalarField":
        return ScalarField(self.grid, -self.values)


@dataclass(frozen=True, eq=False)
class VectorField3:
    """
    R^3-valued field over the 2D grid; the third component never carries derivatives.

    :param components: the three :py:class:`ScalarField` components ``(c1, c2, c3)``
    """

    components: tuple[ScalarField, ScalarField, ScalarField]

    def __post_init__(self) -> None:
        if len(self.components) != 3:
            raise DDMaxwellUserError(f"A VectorField3 needs 3 components, got {len(self.components)}.")
        grid = self.components[0].grid
        for component in self.components[1:]:
            _same_grid(grid, component.grid)
        object.__setattr__(self, "components", tuple(self.components))

    @classmethod
    def from_arrays(cls, grid: Grid, c1: RealArray, c2: RealArray, c3: RealArray) -> "VectorField3":
        return cls((ScalarField(grid, c1), ScalarField(grid, c2), ScalarField(grid, c3)))

    @classmethod
    def from_stacked(cls, grid: Grid, values: RealArray) -> "VectorField3":
        return cls.from_arrays(grid, values[0], values[1], values[2])

    @classmethod
    def from_spectra(cls, grid: Grid, spectra: ComplexArray) -> "VectorField3":
        return cls.from_stacked(grid, backward(spectra, grid.n))

    @classmethod
    def zeros(cls, grid: Grid) -> "VectorField3":
        zero = ScalarField.zeros(grid)
        return cls((zero, zero, zero))

    @property
    def grid(self) -> Grid:
        return self.components[0].grid

    @property
    def c1(self) -> ScalarField:
        return self.components[0]

    @property
    def c2(self) -> ScalarField:
        return self.components[1]

    @property
    def c3(self) -> ScalarField:
        return self.components[2]

    @cached_property
    def values(self) -> RealArray:
        """components stacked on axis 0, shape ``(3, N, N)``"""
        return _frozen(np.stack([c.values for c in self.components]))

    @cached_property
    def spectrum(self) -> ComplexArray:
        return np.stack([c.spectrum for c in self.components])

    @property
    def is_finite(self) -> bool:
        return all(c.is_finite for c in self.components)

    def magnitude_sq(self) -> RealArray:
        """pointwise ``|v|^2``"""
        return np.sum(self.values**2, axis=0)

    def __iter__(self) -> Iterator[ScalarField]:
        return iter(self.components)

    def __add__(self, other: "VectorField3") -> "VectorField3":
        _same_grid(self.grid, other.grid)
        return VectorField3.from_stacked(self.grid, self.values + other.values)

    def __sub__(self, other: "VectorField3") -> "VectorField3":
        _same_grid(self.grid, other.grid)
        return VectorField3.from_stacked(self.grid, self.values - other.values)

    def __mul__(self, factor: float) -> "VectorField3":
        return VectorField3.from_stacked(self.grid, self.values * factor)

    __rmul__ = __mul__

    def __neg__(self) -> "VectorField3":
        return VectorField3.from_stacked(self.grid, -self.values)


Field = ScalarField | VectorField3


def _same_grid(a: Grid, b: Grid) -> None:
    if a != b:
        raise DDMaxwellUserError(f"Fields live on different grids: {a} vs {b}.")


def require_finite(field: Field, name: str = "field") -> None:
    """:raises DDMaxwellUserError: if ``field`` contains NaN or infinite samples"""
    if not field.is_finite:
        raise DDMaxwellUserError(f"{name} contains non-finite values.")
