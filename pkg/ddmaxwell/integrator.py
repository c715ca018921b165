"""
Exponential time integration of the drift-diffusion-Maxwell system.

The linear operator ``L(rho, E, B) = (lap rho, curl B + grad rho, -curl E)`` is propagated exactly
mode by mode; the remainder ``R = rhs - L`` (transport, Lorentz-type product and cutoff
corrections) is treated by the second-order exponential Runge-Kutta scheme

    a   = e^{hL} w + h phi_1(hL) R(w)
    w+  = a + h phi_2(hL) (R(a) - R(w))

Per mode ``k`` the linear operator splits into characteristic scalars: ``rho`` (rate ``-|k|^2``),
``g = ik.E - rho`` (rate 0), ``E_T -+ B_3`` (rates ``+-i|k|``), ``E_3 +- B_T`` (rates ``+-i|k|``)
and ``B_L`` (rate 0), where ``L``/``T`` are the components along ``k/|k|`` and its rotation.
Since ``ik.R_E = R_rho`` mode by mode, ``g`` and hence ``div E - rho`` are carried unchanged.
"""

import logging
import math
from collections.abc import Callable
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from functools import lru_cache
from pathlib import Path

import numpy as np

from ddmaxwell.constants import MAX_CFL_HALVINGS
from ddmaxwell.dynamics import (
    State,
    diagnostics,
    energy_identity_terms,
    linear_spectrum,
    project_state,
    rhs_spectrum,
)
from ddmaxwell.exceptions import DDMaxwellBlowUpError, DDMaxwellConfigError, DDMaxwellUserError
from ddmaxwell.helpers import backward, fft_workers, phi_functions
from ddmaxwell.models import TrajectoryRecord
from ddmaxwell.spectral import CutoffOperator, Grid
from ddmaxwell.type_alias import ComplexArray, RealArray

logger = logging.getLogger(__name__)


@dataclass(frozen=True, kw_only=True)
class IntegratorConfig:
    """
    :param dt: time step
    :param t_end: final time
    :param cutoff_radius: Friedrichs radius in mode numbers, ``None`` for no cutoff
    :param cfl_safety: safety factor of the CFL bound, in ``(0, 1]``
    :param record_every: number of steps between two diagnostics rows
    :param coupled: ``False`` evolves heat flow and vacuum Maxwell independently (``j = 0``)
    """

    dt: float
    t_end: float
    cutoff_radius: float | None = None
    cfl_safety: float = 0.9
    record_every: int = 10
    coupled: bool = True

    def __post_init__(self) -> None:
        if not (math.isfinite(self.dt) and self.dt > 0):
            raise DDMaxwellConfigError(f"must be positive, got {self.dt}", key="time.dt")
        if not (math.isfinite(self.t_end) and self.t_end > 0):
            raise DDMaxwellConfigError(f"must be positive, got {self.t_end}", key="time.t_end")
        if not 0 < self.cfl_safety <= 1:
            raise DDMaxwellConfigError(f"must lie in (0, 1], got {self.cfl_safety}", key="time.cfl_safety")
        if self.record_every < 1:
            raise DDMaxwellConfigError(
                f"must be a positive integer, got {self.record_every}", key="record_every"
            )

    @property
    def cutoff(self) -> CutoffOperator | None:
        return None if self.cutoff_radius is None else CutoffOperator(self.cutoff_radius)

    @property
    def steps(self) -> int:
        return max(1, math.ceil(self.t_end / self.dt - 1e-9))


@dataclass(frozen=True)
class _Coefficients:
    """``f(hL)`` for one scalar function ``f``: heat factor, Maxwell sums/differences and the feed"""

    heat: ComplexArray
    rotation_sum: ComplexArray
    rotation_diff: ComplexArray
    neutral: complex
    feed: ComplexArray


@dataclass(frozen=True)
class Propagator:
    """Cached exponential and phi-function coefficients of ``hL`` on one grid"""

    grid: Grid
    h: float
    coupled: bool
    unit: tuple[RealArray, RealArray]
    functions: tuple[_Coefficients, _Coefficients, _Coefficients]

    def apply(self, which: int, u: ComplexArray) -> ComplexArray:
        """``f(hL) u`` with ``f`` = exp (0), phi_1 (1) or phi_2 (2)"""
        c = self.functions[which]
        n1, n2 = self.unit
        rho, e, b = u[0], u[1:4], u[4:7]
        e_l, e_t = n1 * e[0] + n2 * e[1], -n2 * e[0] + n1 * e[1]
        b_l, b_t = n1 * b[0] + n2 * b[1], -n2 * b[0] + n1 * b[1]

        new_e_l = c.neutral * e_l
        if self.coupled:
            new_e_l = new_e_l + c.feed * rho
        # (E_T, B3) rotate with e^{-i|k|h} on E_T + B3, (E3, B_T) with e^{+i|k|h} on E3 + B_T
        new_e_t = c.rotation_sum * e_t + c.rotation_diff * b[2]
        new_b3 = c.rotation_diff * e_t + c.rotation_sum * b[2]
        new_e3 = c.rotation_sum * e[2] - c.rotation_diff * b_t
        new_b_t = -c.rotation_diff * e[2] + c.rotation_sum * b_t
        new_b_l = c.neutral * b_l

        out = np.empty_like(u)
        out[0] = c.heat * rho
        out[1] = n1 * new_e_l - n2 * new_e_t
        out[2] = n2 * new_e_l + n1 * new_e_t
        out[3] = new_e3
        out[4] = n1 * new_b_l - n2 * new_b_t
        out[5] = n2 * new_b_l + n1 * new_b_t
        out[6] = new_b3
        return out


@lru_cache(maxsize=32)
def propagator(grid: Grid, h: float, coupled: bool = True) -> Propagator:
    k1, k2 = grid.derivative_symbols
    kappa = np.sqrt(k1**2 + k2**2)
    moving = kappa > 0
    safe = np.where(moving, kappa, 1.0)
    unit = (np.where(moving, k1 / safe, 1.0), np.where(moving, k2 / safe, 0.0))

    heat = phi_functions(-h * grid.k_squared)
    plus = phi_functions(1j * h * kappa)
    minus = phi_functions(-1j * h * kappa)
    neutral = (1.0, 1.0, 0.5)
    functions = tuple(
        _Coefficients(
            heat=heat[i],
            rotation_sum=0.5 * (minus[i] + plus[i]),
            rotation_diff=0.5 * (minus[i] - plus[i]),
            neutral=neutral[i],
            feed=np.where(moving, (heat[i] - neutral[i]) / (1j * safe), 0.0),
        )
        for i in range(3)
    )
    return Propagator(grid, h, coupled, unit, functions)  # type: ignore[arg-type]


def linear_propagator(s: State, dt: float, coupled: bool = True) -> State:
    """
    ``e^{dt L} s``: heat semigroup on ``rho``, exact Maxwell rotation of ``(E, B)`` and the
    longitudinal ``grad rho`` feed into ``E`` (dropped for ``coupled=False``).

    :raises DDMaxwellUserError: for negative ``dt``
    """
    if dt < 0:
        raise DDMaxwellUserError(f"dt must be non-negative, got {dt}.")
    u = propagator(s.grid, float(dt), coupled).apply(0, s.spectrum)
    return State.from_spectrum(s.grid, u, s.time + dt, s.constrained)


def _remainder(grid: Grid, u: ComplexArray, cutoff: CutoffOperator | None, coupled: bool) -> ComplexArray:
    return rhs_spectrum(grid, u, cutoff, coupled) - linear_spectrum(grid, u, coupled) * grid.interior_mask


def _etd_rk2(
    grid: Grid, u: ComplexArray, h: float, cutoff: CutoffOperator | None, coupled: bool
) -> ComplexArray:
    prop = propagator(grid, h, coupled)
    r0 = _remainder(grid, u, cutoff, coupled)
    a = prop.apply(0, u) + h * prop.apply(1, r0)
    r1 = _remainder(grid, a, cutoff, coupled)
    return a + h * prop.apply(2, r1 - r0)


def _sup_norms(grid: Grid, u: ComplexArray) -> tuple[float, float]:
    planes = backward(u[:4], grid.n)
    linf_rho = float(np.max(np.abs(planes[0])))
    linf_e = float(np.sqrt(np.max(np.sum(planes[1:4] ** 2, axis=0))))
    return linf_rho, linf_e


def cfl_limit(grid: Grid, linf_rho: float, linf_e: float, safety: float) -> float:
    """largest admissible step: ``safety * min(1, dx / max(1, |E|_inf + |rho|_inf))``"""
    return safety * min(1.0, grid.spacing / max(1.0, linf_e + linf_rho))


def _advance(
    grid: Grid,
    u: ComplexArray,
    t: float,
    h: float,
    cfg: IntegratorConfig,
    cutoff: CutoffOperator | None,
    depth: int,
) -> ComplexArray:
    linf_rho, linf_e = _sup_norms(grid, u)
    if not (math.isfinite(linf_rho) and math.isfinite(linf_e)):
        raise DDMaxwellBlowUpError(t, linf_rho, f"Non-finite state at t={t:.6g}")
    if h <= cfl_limit(grid, linf_rho, linf_e, cfg.cfl_safety) * (1 + 1e-12):
        return _etd_rk2(grid, u, h, cutoff, cfg.coupled)
    if depth >= MAX_CFL_HALVINGS:
        raise DDMaxwellBlowUpError(t, linf_rho)
    logger.warning(
        f"CFL violated at t={t:.6g} (|rho|_inf={linf_rho:.4g}, |E|_inf={linf_e:.4g}), halving h={h:.4g}"
    )
    u = _advance(grid, u, t, h / 2, cfg, cutoff, depth + 1)
    return _advance(grid, u, t + h / 2, h / 2, cfg, cutoff, depth + 1)


def step(s: State, cfg: IntegratorConfig) -> State:
    """
    One ETD-RK2 step of size ``cfg.dt``, split into halves (recursively, at most 20 times)
    while the CFL bound is violated.

    :raises DDMaxwellBlowUpError: when the CFL bound cannot be met
    """
    cutoff = cfg.cutoff
    if cutoff is not None:
        cutoff.validate(s.grid, dealias=False)
    u = _advance(s.grid, s.spectrum, s.time, cfg.dt, cfg, cutoff, 0)
    return State.from_spectrum(s.grid, u, s.time + cfg.dt, s.constrained)


def _ledger_entry(traj: TrajectoryRecord, s: State) -> None:
    report = energy_identity_terms(s)
    traj.ledger.append(
        s.time,
        report.energy,
        report.grad_rho_l2_sq,
        report.balance,
        report.I1 + report.I2 + report.I3,
    )


def _dissipation(traj: TrajectoryRecord) -> float:
    ledger = traj.ledger
    t, d = ledger.t, ledger.dissipation_rate
    return float(sum(0.5 * (d[i] + d[i - 1]) * (t[i] - t[i - 1]) for i in range(1, len(t))))


SnapshotSink = Callable[[State], Path]


def simulate(
    initial: State,
    cfg: IntegratorConfig,
    keep_states: bool = False,
    snapshot_sink: SnapshotSink | None = None,
    snapshot_every: int = 0,
) -> TrajectoryRecord:
    """
    Integrate from ``initial.time`` to ``initial.time + cfg.t_end``.

    The energy ledger gets a row every step, diagnostics rows are recorded every
    ``cfg.record_every`` steps and at the final time.

    :param keep_states: also keep the recorded states in the trajectory
    :param snapshot_sink: called with the state every ``snapshot_every`` steps (and at the end),
        returns the written path
    :raises DDMaxwellBlowUpError: on CFL exhaustion, with the partial trajectory attached as ``.trajectory``
    """
    grid = initial.grid
    cutoff = cfg.cutoff
    if cutoff is not None:
        cutoff.validate(grid, dealias=False)
    traj = TrajectoryRecord(states=[] if keep_states else None, cutoff_radius=cfg.cutoff_radius)
    logger.info(
        f"Simulating N={grid.n}, L={grid.domain_length:.6g}, cutoff={cfg.cutoff_radius}, "
        f"dt={cfg.dt:g}, t_end={cfg.t_end:g}, coupled={cfg.coupled}"
    )

    def record(state: State) -> None:
        row = diagnostics(state)
        row["dissipation_integral"] = _dissipation(traj)
        traj.append(row, state)

    def snapshot(state: State, index: int, last: bool) -> None:
        if snapshot_sink is not None and snapshot_every > 0 and (index % snapshot_every == 0 or last):
            traj.snapshots.append(snapshot_sink(state))

    state = initial
    t0 = initial.time
    _ledger_entry(traj, state)
    record(state)
    snapshot(state, 0, False)
    u = state.spectrum
    total = cfg.steps
    try:
        for index in range(1, total + 1):
            t = t0 + (index - 1) * cfg.dt
            h = min(cfg.dt, t0 + cfg.t_end - t)
            u = _advance(grid, u, t, h, cfg, cutoff, 0)
            last = index == total
            state = State.from_spectrum(grid, u, t + h if last else t0 + index * cfg.dt, initial.constrained)
            _ledger_entry(traj, state)
            if index % cfg.record_every == 0 or last:
                record(state)
                logger.debug(f"step {index}/{total} t={state.time:.6g} energy={traj.rows[-1]['energy']:.10g}")
            snapshot(state, index, last)
    except DDMaxwellBlowUpError as error:
        error.trajectory = traj
        logger.error(str(error))
        raise
    logger.info(f"Finished at t={state.time:.6g} with {len(traj)} recorded rows")
    return traj


@dataclass
class FriedrichsSequence:
    """
    Runs of the cutoff systems for increasing radii.

    :param distances: ``sup_t ||u_{n_i} - u_{n_{i+1}}||_{L^2}`` for consecutive radii
    """

    radii: list[float]
    trajectories: list[TrajectoryRecord]
    distances: list[float] = field(default_factory=list)


def state_distance(a: State, b: State) -> float:
    """``L^2`` distance of the full states, ``(||d rho||^2 + ||d E||^2 + ||d B||^2)^{1/2}``"""
    grid = a.grid
    difference = np.abs(a.spectrum - b.spectrum) ** 2
    return math.sqrt(grid.plancherel(np.sum(difference, axis=0)))


def friedrichs_sequence(
    initial: State, cfg: IntegratorConfig, radii: list[float], max_workers: int | None = None
) -> FriedrichsSequence:
    """
    Simulate the cutoff system once per radius from ``J_n`` of the same initial data and measure
    how far consecutive members are apart.

    :param radii: strictly increasing radii, each at most ``N/3``
    :param max_workers: thread pool size, defaults to ``DDMX_THREADS``
    :raises DDMaxwellConfigError: if the radii are not increasing or violate de-aliasing
    """
    grid = initial.grid
    if not radii:
        raise DDMaxwellConfigError("needs at least one radius", key="converge.radii")
    if any(b <= a for a, b in zip(radii, radii[1:])):
        raise DDMaxwellConfigError(f"radii must increase strictly, got {radii}", key="converge.radii")
    for radius in radii:
        CutoffOperator(radius).validate(grid, dealias=True)

    def run(radius: float) -> TrajectoryRecord:
        start = project_state(initial, CutoffOperator(radius))
        return simulate(start, replace(cfg, cutoff_radius=radius), keep_states=True)

    with ThreadPoolExecutor(max_workers=max_workers or fft_workers()) as pool:
        trajectories = list(pool.map(run, radii))

    distances = []
    for coarse, fine in zip(trajectories, trajectories[1:]):
        pairs = zip(coarse.states or [], fine.states or [])
        distances.append(max((state_distance(a, b) for a, b in pairs), default=0.0))
    logger.info(f"Friedrichs sequence radii={radii} distances={distances}")
    return FriedrichsSequence(list(radii), trajectories, distances)
