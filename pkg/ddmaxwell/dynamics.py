"""
Right-hand side of the drift-diffusion-Maxwell system on the torus,

    d_t rho = lap rho - div(rho E)
    d_t E   = curl B - j,        j = rho E - grad rho
    d_t B   = -curl E

with the optional Friedrichs cutoff applied to the nonlinear and diffusive terms, together with
constraint residuals and the integrands of the L^2 and H^1 balance laws.

Spectral states are stacked on axis 0 in the order ``rho, E1, E2, E3, B1, B2, B3``.
"""

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from ddmaxwell.constants import SNAPSHOT_PLANES
from ddmaxwell.exceptions import DDMaxwellConstraintError, DDMaxwellUserError
from ddmaxwell.helpers import backward, cumulative_trapezoid, forward
from ddmaxwell.models import EntropyFlux, GaussResiduals, TrajectoryRecord
from ddmaxwell.spectral import CutoffOperator, Grid, ScalarField, VectorField3
from ddmaxwell.spectral.norms import pad_spectrum
from ddmaxwell.spectral.operators import (
    check_zero_mean,
    curl_spectrum,
    divergence_spectrum,
    gradient_spectrum,
)
from ddmaxwell.type_alias import ComplexArray, Diagnostics, RealArray

PLANES = len(SNAPSHOT_PLANES)


@dataclass(frozen=True, eq=False)
class State:
    """
    Density, electric and magnetic field at one time.

    :param constrained: enforce the zero-mean density required by Gauss's law on the torus;
        decoupled fixtures (pure heat flow, positive densities) switch it off
    :raises DDMaxwellConstraintError: if ``constrained`` and ``rho`` has nonzero mean
    """

    rho: ScalarField
    E: VectorField3
    B: VectorField3
    time: float = 0.0
    constrained: bool = True

    def __post_init__(self) -> None:
        if not (self.rho.grid == self.E.grid == self.B.grid):
            raise DDMaxwellUserError("rho, E and B must share one grid.")
        if self.constrained:
            check_zero_mean(self.rho)

    @classmethod
    def zeros(cls, grid: Grid, time: float = 0.0) -> "State":
        return cls(ScalarField.zeros(grid), VectorField3.zeros(grid), VectorField3.zeros(grid), time)

    @classmethod
    def from_spectrum(
        cls, grid: Grid, spectrum: ComplexArray, time: float = 0.0, constrained: bool = True
    ) -> "State":
        return cls.from_planes(grid, backward(spectrum, grid.n), time, constrained)

    @classmethod
    def from_planes(
        cls, grid: Grid, planes: RealArray, time: float = 0.0, constrained: bool = True
    ) -> "State":
        """build a state from the stacked physical planes ``rho, E1, E2, E3, B1, B2, B3``"""
        if planes.shape != (PLANES, grid.n, grid.n):
            expected = (PLANES, grid.n, grid.n)
            raise DDMaxwellUserError(f"Expected planes of shape {expected}, got {planes.shape}.")
        return cls(
            ScalarField(grid, planes[0]),
            VectorField3.from_stacked(grid, planes[1:4]),
            VectorField3.from_stacked(grid, planes[4:7]),
            time,
            constrained,
        )

    @property
    def grid(self) -> Grid:
        return self.rho.grid

    @property
    def F(self) -> tuple[VectorField3, VectorField3]:
        return self.E, self.B

    @cached_property
    def planes(self) -> RealArray:
        return np.concatenate([self.rho.values[None], self.E.values, self.B.values])

    @cached_property
    def spectrum(self) -> ComplexArray:
        return np.concatenate([self.rho.spectrum[None], self.E.spectrum, self.B.spectrum])

    def with_time(self, time: float) -> "State":
        return State(self.rho, self.E, self.B, time, self.constrained)

    def scaled(self, factor: float) -> "State":
        return State(self.rho * factor, self.E * factor, self.B * factor, self.time, self.constrained)


@dataclass(frozen=True, eq=False)
class Tendency:
    """time derivative ``(d_t rho, d_t E, d_t B)`` of a :py:class:`State`"""

    rho: ScalarField
    E: VectorField3
    B: VectorField3

    @classmethod
    def from_spectrum(cls, grid: Grid, spectrum: ComplexArray) -> "Tendency":
        planes = backward(spectrum, grid.n)
        return cls(
            ScalarField(grid, planes[0]),
            VectorField3.from_stacked(grid, planes[1:4]),
            VectorField3.from_stacked(grid, planes[4:7]),
        )


def project_state(s: State, cutoff: CutoffOperator | None) -> State:
    """Apply ``J_n`` (if any) and drop the Nyquist lines, on which the evolution is not defined"""
    spectrum = s.spectrum * s.grid.interior_mask
    if cutoff is not None:
        spectrum = cutoff.apply_spectrum(s.grid, spectrum)
    return State.from_spectrum(s.grid, spectrum, s.time, s.constrained)


def _check_cutoff(grid: Grid, cutoff: CutoffOperator | None) -> None:
    if cutoff is not None:
        cutoff.validate(grid, dealias=False)


def _cut(grid: Grid, cutoff: CutoffOperator | None, spectrum: ComplexArray) -> ComplexArray:
    return spectrum if cutoff is None else cutoff.apply_spectrum(grid, spectrum)


def linear_spectrum(grid: Grid, u: ComplexArray, coupled: bool = True) -> ComplexArray:
    """
    Action of the linear operator ``(lap rho, curl B + grad rho, -curl E)`` that the integrator
    propagates exactly; ``coupled=False`` drops the ``grad rho`` feed.
    """
    out = np.empty_like(u)
    out[0] = -grid.k_squared * u[0]
    out[1:4] = curl_spectrum(grid, u[4:7])
    out[4:7] = -curl_spectrum(grid, u[1:4])
    if coupled:
        out[1:3] += gradient_spectrum(grid, u[0])
    return out


def split_rhs_spectrum(
    grid: Grid, u: ComplexArray, cutoff: CutoffOperator | None = None, coupled: bool = True
) -> tuple[ComplexArray, ComplexArray]:
    """
    Linear and quadratic parts of the right-hand side, before the Nyquist projection.

    linear: ``(J lap rho, curl B + J grad rho, -curl E)``; quadratic: ``(-J div(rho E), -J(rho E), 0)``.
    """
    linear = np.empty_like(u)
    linear[0] = _cut(grid, cutoff, -grid.k_squared * u[0])
    linear[1:4] = curl_spectrum(grid, u[4:7])
    linear[4:7] = -curl_spectrum(grid, u[1:4])
    quadratic = np.zeros_like(u)
    if not coupled:
        return linear, quadratic

    linear[1:3] += _cut(grid, cutoff, gradient_spectrum(grid, u[0]))
    rho = backward(u[0], grid.n)
    field = backward(u[1:4], grid.n)
    flux = _cut(grid, cutoff, forward(rho * field))
    quadratic[0] = -divergence_spectrum(grid, flux)
    quadratic[1:4] = -flux
    return linear, quadratic


def rhs_spectrum(
    grid: Grid, u: ComplexArray, cutoff: CutoffOperator | None = None, coupled: bool = True
) -> ComplexArray:
    linear, quadratic = split_rhs_spectrum(grid, u, cutoff, coupled)
    return (linear + quadratic) * grid.interior_mask


def rhs(s: State, cutoff: CutoffOperator | None = None, coupled: bool = True) -> Tendency:
    """
    ``(J lap rho - J div(rho E), curl B - j, -curl E)`` with ``j = J(rho E - grad rho)``;
    ``J`` is the identity without cutoff.

    The tendency satisfies ``div(d_t E) = d_t rho`` mode by mode, which is what transports the
    Gauss law.

    :raises DDMaxwellConfigError: if the cutoff radius exceeds the Nyquist index
    """
    _check_cutoff(s.grid, cutoff)
    return Tendency.from_spectrum(s.grid, rhs_spectrum(s.grid, s.spectrum, cutoff, coupled))


def rhs_parts(s: State, cutoff: CutoffOperator | None = None) -> tuple[Tendency, Tendency]:
    """linear and quadratic parts of :py:func:`rhs`, so that ``rhs(a s) = a lin + a^2 quad``"""
    _check_cutoff(s.grid, cutoff)
    mask = s.grid.interior_mask
    linear, quadratic = split_rhs_spectrum(s.grid, s.spectrum, cutoff)
    return Tendency.from_spectrum(s.grid, linear * mask), Tendency.from_spectrum(s.grid, quadratic * mask)


def current_density(s: State, cutoff: CutoffOperator | None = None) -> VectorField3:
    """``j = rho E - grad rho``, with ``J_n`` applied to the whole expression when a cutoff is given"""
    grid = s.grid
    current = forward(s.rho.values * s.E.values)
    current[:2] -= gradient_spectrum(grid, s.rho.spectrum)
    return VectorField3.from_spectra(grid, _cut(grid, cutoff, current))


def gauss_residuals(s: State) -> GaussResiduals:
    """``||div E - rho||_{L^2}`` and ``||div B||_{L^2}``"""
    grid = s.grid
    e_defect = divergence_spectrum(grid, s.E.spectrum) - s.rho.spectrum
    b_defect = divergence_spectrum(grid, s.B.spectrum)
    return GaussResiduals(
        e_residual=math.sqrt(grid.plancherel(np.abs(e_defect) ** 2)),
        b_residual=math.sqrt(grid.plancherel(np.abs(b_defect) ** 2)),
    )


class _Quadrature:
    """physical samples on an optionally refined grid and the matching cell-weighted sums"""

    def __init__(self, grid: Grid, oversample: int = 1):
        if not isinstance(oversample, int) or oversample < 1:
            raise DDMaxwellUserError(f"oversample must be a positive integer, got {oversample!r}.")
        self.grid = grid
        self.size = grid.n * oversample
        self.cell = (grid.domain_length / self.size) ** 2

    def sample(self, spectrum: ComplexArray) -> RealArray:
        if self.size == self.grid.n:
            return backward(spectrum, self.size)
        if spectrum.ndim == 2:
            return backward(pad_spectrum(spectrum, self.grid.n, self.size), self.size)
        return np.stack([self.sample(s) for s in spectrum])

    def integral(self, values: RealArray) -> float:
        return float(np.sum(values)) * self.cell


def _energy_squares(s: State) -> tuple[float, float, float, float]:
    grid = s.grid
    k1, k2 = grid.derivative_symbols
    rho_hat = s.rho.spectrum
    return (
        grid.plancherel(np.abs(rho_hat) ** 2),
        grid.plancherel(np.sum(np.abs(s.E.spectrum) ** 2, axis=0)),
        grid.plancherel(np.sum(np.abs(s.B.spectrum) ** 2, axis=0)),
        grid.plancherel((k1**2 + k2**2) * np.abs(rho_hat) ** 2),
    )


@dataclass
class EnergyReport:
    """Terms of the L^2 balance ``d/dt energy + ||grad rho||^2 = I1 + I2 + I3 + I4``.

    ``I1 = -int rho E.grad rho``, ``I2 = -int rho^3``, ``I3 = -int rho |E|^2``, ``I4 = int E.grad rho``.
    ``I1_closed = int rho^3 / 2`` and ``I4_closed = -int rho^2`` are their integrated-by-parts
    forms on Gauss-compatible states. ``identity_residual`` is filled in by the energy check.
    """

    l2_rho_sq: float
    l2_E_sq: float
    l2_B_sq: float
    grad_rho_l2_sq: float
    I1: float
    I2: float
    I3: float
    I4: float
    I1_closed: float
    I4_closed: float
    identity_residual: float | None = None

    @property
    def energy(self) -> float:
        return 0.5 * (self.l2_rho_sq + self.l2_E_sq + self.l2_B_sq)

    @property
    def balance(self) -> float:
        return self.I1 + self.I2 + self.I3 + self.I4


def energy_identity_terms(s: State, oversample: int = 1) -> EnergyReport:
    grid = s.grid
    quad = _Quadrature(grid, oversample)
    rho = quad.sample(s.rho.spectrum)
    field = quad.sample(s.E.spectrum)
    grad = quad.sample(gradient_spectrum(grid, s.rho.spectrum))
    drift = field[0] * grad[0] + field[1] * grad[1]
    l2_rho_sq, l2_e_sq, l2_b_sq, grad_sq = _energy_squares(s)
    return EnergyReport(
        l2_rho_sq=l2_rho_sq,
        l2_E_sq=l2_e_sq,
        l2_B_sq=l2_b_sq,
        grad_rho_l2_sq=grad_sq,
        I1=-quad.integral(rho * drift),
        I2=-quad.integral(rho**3),
        I3=-quad.integral(rho * np.sum(field**2, axis=0)),
        I4=quad.integral(drift),
        I1_closed=0.5 * quad.integral(rho**3),
        I4_closed=-l2_rho_sq,
    )


@dataclass
class H1Report:
    """Terms of the H^1 balance ``d/dt ||grad F||^2 / 2 + ||grad^2 rho||^2 = J1 + ... + J6``.

    ``grad_F_l2_sq`` is ``||grad rho||^2 + ||grad E||^2 + ||grad B||^2``; ``J5_closed`` is
    ``int rho |grad rho|^2 / 2``, equal to ``J5`` on Gauss-compatible states.
    """

    grad_F_l2_sq: float
    hess_rho_l2_sq: float
    J1: float
    J2: float
    J3: float
    J4: float
    J5: float
    J6: float
    J5_closed: float
    balance_residual: float | None = None

    @property
    def balance(self) -> float:
        return self.J1 + self.J2 + self.J3 + self.J4 + self.J5 + self.J6


def _derivatives(s: State) -> tuple[ComplexArray, ComplexArray, ComplexArray, ComplexArray]:
    """spectra of ``d_i rho``, ``d_i d_j rho``, ``d_i E_j`` and ``d_i B_j`` (``i, j`` planar first)"""
    grid = s.grid
    k1, k2 = grid.derivative_symbols
    symbols = (1j * k1, 1j * k2)
    rho_hat = s.rho.spectrum
    grad = np.stack([d * rho_hat for d in symbols])
    hess = np.stack([[di * dj * rho_hat for dj in symbols] for di in symbols])
    grad_e = np.stack([[d * e for e in s.E.spectrum] for d in symbols])
    grad_b = np.stack([[d * b for b in s.B.spectrum] for d in symbols])
    return grad, hess, grad_e, grad_b


def h1_balance_terms(s: State, oversample: int = 1) -> H1Report:
    grid = s.grid
    quad = _Quadrature(grid, oversample)
    grad_hat, hess_hat, grad_e_hat, grad_b_hat = _derivatives(s)
    rho = quad.sample(s.rho.spectrum)
    field = quad.sample(s.E.spectrum)
    grad = quad.sample(grad_hat)
    hess = np.stack([quad.sample(row) for row in hess_hat])
    grad_e = np.stack([quad.sample(row) for row in grad_e_hat])

    grad_sq = np.sum(grad**2, axis=0)
    grad_e_sq = np.sum(grad_e**2, axis=(0, 1))
    # sum_i d_i rho (E . d_i E)
    j2 = sum(grad[i] * np.sum(field * grad_e[i], axis=0) for i in range(2))
    # sum_ij d_i E_j d_j rho d_i rho, j planar since d_3 rho = 0
    j4 = sum(grad_e[i, j] * grad[j] * grad[i] for i in range(2) for j in range(2))
    j5 = sum(field[j] * hess[i, j] * grad[i] for i in range(2) for j in range(2))
    j1 = sum(hess[i, j] * grad_e[i, j] for i in range(2) for j in range(2))

    planar_sq = np.abs(grad_hat) ** 2
    grad_f_sq = grid.plancherel(np.sum(planar_sq, axis=0))
    grad_f_sq += grid.plancherel(np.sum(np.abs(grad_e_hat) ** 2, axis=(0, 1)))
    grad_f_sq += grid.plancherel(np.sum(np.abs(grad_b_hat) ** 2, axis=(0, 1)))
    return H1Report(
        grad_F_l2_sq=grad_f_sq,
        hess_rho_l2_sq=grid.plancherel(grid.k_squared**2 * np.abs(s.rho.spectrum) ** 2),
        J1=quad.integral(j1),
        J2=-quad.integral(j2),
        J3=-quad.integral(rho * grad_e_sq),
        J4=-quad.integral(j4),
        J5=-quad.integral(j5),
        J6=-2.0 * quad.integral(rho * grad_sq),
        J5_closed=0.5 * quad.integral(rho * grad_sq),
    )


def h1_majorants(s: State, c_gn: float = 1.0) -> dict[str, float]:
    """
    Young/Gagliardo-Nirenberg majorants of ``|J1|, |J2|, |J4|, |J5|``:

    * ``|J1| <= 2 ||grad F||^2 + ||grad^2 rho||^2 / 8``
    * ``|J2| <= ||grad^2 rho||^2 / 8 + C^2 ||E||^2 ||grad F||^2 / 2``
    * ``|J4| <= ||grad^2 rho||^2 / 8 + 2 C^2 ||grad rho||^2 ||grad F||^2``
    * ``|J5| <= ||grad^2 rho||^2 / 8 + C^2 ||rho||^2 ||grad rho||^2 / 2``

    :param c_gn: constant of ``||u||_{L^4}^2 <= C ||u||_2 ||grad u||_2`` on zero-mean fields
    """
    report = h1_balance_terms(s)
    l2_rho_sq, l2_e_sq, _, grad_rho_sq = _energy_squares(s)
    hess = report.hess_rho_l2_sq / 8.0
    grad_f = report.grad_F_l2_sq
    c_sq = c_gn**2
    return {
        "J1": 2.0 * grad_f + hess,
        "J2": hess + 0.5 * c_sq * l2_e_sq * grad_f,
        "J4": hess + 2.0 * c_sq * grad_rho_sq * grad_f,
        "J5": hess + 0.5 * c_sq * l2_rho_sq * grad_rho_sq,
    }


def entropy_flux(s: State) -> EntropyFlux:
    """
    ``||H||_{L^2}`` for ``H = grad sqrt(rho) - E sqrt(rho) / 2``

    :raises DDMaxwellConstraintError: if ``rho`` is not strictly positive
    """
    minimum = float(np.min(s.rho.values))
    if minimum <= 0.0:
        raise DDMaxwellConstraintError(f"entropy flux needs a positive density, min rho = {minimum:.6e}.")
    root = np.sqrt(s.rho.values)
    grad = backward(gradient_spectrum(s.grid, forward(root)), s.grid.n)
    flux = -0.5 * s.E.values * root
    flux[:2] += grad
    return EntropyFlux(h_l2=math.sqrt(float(np.sum(flux**2)) * s.grid.cell_area))


def diagnostics(s: State, oversample: int = 1) -> Diagnostics:
    """
    One time-series row for ``s`` (every column but ``dissipation_integral``, which needs the
    history) plus the auxiliary columns used by the H^1 checks.
    """
    grid = s.grid
    energy = energy_identity_terms(s, oversample)
    h1 = h1_balance_terms(s, oversample)
    residuals = gauss_residuals(s)
    grad_hat, hess_hat, grad_e_hat, _ = _derivatives(s)
    weight = 1.0 + grid.k_squared

    rho = s.rho.values
    field = s.E.values
    grad = backward(grad_hat, grid.n)
    grad_e = backward(grad_e_hat, grid.n)
    current = rho * field
    current[:2] -= grad
    cell = grid.cell_area
    # d_i rho E_j and rho d_i E_j as 2x3 tensors
    z2 = np.sum((grad[:, None] * field[None]) ** 2) * cell
    z3 = np.sum((rho * grad_e) ** 2) * cell
    # d/dt ||grad F||^2 / 2 = <grad u, grad rhs(u)>
    tendency = rhs_spectrum(grid, s.spectrum)
    h1_rate = grid.plancherel(grid.k_squared * np.sum(np.real(np.conj(s.spectrum) * tendency), axis=0))

    return {
        "t": s.time,
        "l2_rho": math.sqrt(energy.l2_rho_sq),
        "l2_E": math.sqrt(energy.l2_E_sq),
        "l2_B": math.sqrt(energy.l2_B_sq),
        "h1_rho": math.sqrt(grid.plancherel(weight * np.abs(s.rho.spectrum) ** 2)),
        "h1_E": math.sqrt(grid.plancherel(weight * np.sum(np.abs(s.E.spectrum) ** 2, axis=0))),
        "h1_B": math.sqrt(grid.plancherel(weight * np.sum(np.abs(s.B.spectrum) ** 2, axis=0))),
        "grad_rho_l2": math.sqrt(energy.grad_rho_l2_sq),
        "hess_rho_l2": math.sqrt(h1.hess_rho_l2_sq),
        "linf_rho": float(np.max(np.abs(rho))),
        "gauss_e_residual": residuals["e_residual"],
        "div_b_residual": residuals["b_residual"],
        "energy": energy.energy,
        "dissipation_integral": 0.0,
        "I1": energy.I1,
        "I2": energy.I2,
        "I3": energy.I3,
        "I4": energy.I4,
        "J1": h1.J1,
        "J2": h1.J2,
        "J3": h1.J3,
        "J4": h1.J4,
        "J5": h1.J5,
        "J6": h1.J6,
        "linf_E": float(np.sqrt(np.max(np.sum(field**2, axis=0)))),
        "grad_F_l2_sq": h1.grad_F_l2_sq,
        "h1_rate": h1_rate,
        "z1": math.sqrt(float(np.sum(current**2)) * cell),
        "z2": math.sqrt(float(z2)),
        "z3": math.sqrt(float(z3)),
        "z4": math.sqrt(h1.hess_rho_l2_sq),
    }


def z_terms(traj: TrajectoryRecord) -> dict[str, RealArray]:
    """
    Running ``L^1_t L^2_x`` norms ``Z1..Z4`` of ``rho E - grad rho``, ``grad rho E``,
    ``rho grad E`` and ``grad^2 rho``; ``||F(t)||_{H^1}`` never exceeds ``||F_0||_{H^1}`` plus their sum.
    """
    times = traj.times
    return {name: cumulative_trapezoid(traj.column(name), times) for name in ("z1", "z2", "z3", "z4")}


def gronwall_h1_envelope(traj: TrajectoryRecord, c_gn: float = 1.0) -> RealArray:
    """
    Gronwall bound on ``||grad F(t)||^2`` from the H^1 balance and the majorants of
    :py:func:`h1_majorants`:

    ``y' <= (4 + C^2 ||E||^2 + 4 C^2 ||grad rho||^2 + 6 ||rho||_inf) y + C^2 ||rho||^2 ||grad rho||^2``

    The ``||rho||_inf`` term bounds ``J3`` and ``J6``, which have no sign for signed densities.
    """
    times = traj.times
    c_sq = c_gn**2
    grad_rho_sq = traj.column("grad_rho_l2") ** 2
    rate = 4.0 + c_sq * traj.column("l2_E") ** 2 + 4.0 * c_sq * grad_rho_sq + 6.0 * traj.column("linf_rho")
    source = c_sq * traj.column("l2_rho") ** 2 * grad_rho_sq
    y0 = traj.column("grad_F_l2_sq")[0]
    return (y0 + cumulative_trapezoid(source, times)) * np.exp(cumulative_trapezoid(rate, times))
