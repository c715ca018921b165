"""
Pass/fail checks over completed trajectories and field corpora.

Identities (energy balance, Gauss transport, isometry, H^1 balance) get absolute or
discretization-order tolerances; inequalities whose constants are only known to exist take the
calibrated constants as arguments.
"""

import logging
import math
from collections.abc import Iterable, Sequence

import numpy as np

from ddmaxwell.constants import (
    CONTRACTION_TOLERANCE,
    ENERGY_TOLERANCE,
    GAUSS_TOLERANCE,
    H1_BALANCE_TOLERANCE,
    ISOMETRY_TOLERANCE,
    SCALAR_TOLERANCE,
    ZERO_MEAN_TOLERANCE,
)
from ddmaxwell.dynamics import (
    State,
    gronwall_h1_envelope,
    h1_balance_terms,
    h1_majorants,
    project_state,
    z_terms,
)
from ddmaxwell.enums import CheckName
from ddmaxwell.exceptions import DDMaxwellUserError
from ddmaxwell.helpers import cumulative_trapezoid, trapezoid
from ddmaxwell.integrator import IntegratorConfig, simulate, state_distance
from ddmaxwell.littlewood_paley import (
    DyadicFilterBank,
    decompose,
    linf_interpolation_bound,
    optimal_truncation,
    trajectory_log_bound,
    truncation_level,
)
from ddmaxwell.models import CheckReport, GrowthConstants, TrajectoryRecord
from ddmaxwell.spectral import (
    CutoffOperator,
    ScalarField,
    band_limited_field,
    divergence_free_field,
    gradient3,
    gradient_l2,
    lp_norm,
    sobolev_norm,
    solve_gauss_electric,
)
from ddmaxwell.type_alias import RealArray

logger = logging.getLogger(__name__)


def _require_rows(traj: TrajectoryRecord, minimum: int, check: str) -> None:
    if len(traj) < minimum:
        raise DDMaxwellUserError(f"{check} needs at least {minimum} recorded rows, got {len(traj)}.")


def ledger_residuals(energy: RealArray, rate: RealArray, times: RealArray) -> RealArray:
    """
    ``(energy(t_{i+1}) - energy(t_{i-1}) - int rate dt) / (t_{i+1} - t_{i-1})`` over consecutive
    step pairs, the integral taken by Simpson's rule on the (possibly uneven) pair.

    A pair whose two steps differ by more than a factor 4 (a shortened final step) falls back to
    the trapezoid rule on its second step. Two samples give the single trapezoid step.
    """
    if len(times) == 2:
        h = times[1] - times[0]
        return np.array([(energy[1] - energy[0]) / h - 0.5 * (rate[0] + rate[1])])
    h0 = times[1:-1] - times[:-2]
    h1 = times[2:] - times[1:-1]
    span = h0 + h1
    simpson = (span / 6) * (
        (2 - h1 / h0) * rate[:-2] + span**2 / (h0 * h1) * rate[1:-1] + (2 - h0 / h1) * rate[2:]
    )
    paired = (energy[2:] - energy[:-2] - simpson) / span
    single = (energy[2:] - energy[1:-1]) / h1 - 0.5 * (rate[1:-1] + rate[2:])
    skewed = np.minimum(h0, h1) < 0.25 * np.maximum(h0, h1)
    return np.where(skewed, single, paired)


def check_energy_identity(traj: TrajectoryRecord, tol: float = ENERGY_TOLERANCE) -> CheckReport:
    """
    (a) ``d/dt energy + ||grad rho||^2 - (I1 + I2 + I3 + I4)`` stays below ``tol`` on the per-step
    ledger, compared in integrated form over each pair of steps (see :func:`ledger_residuals`);
    (b) ``energy(t) + int ||grad rho||^2 <= energy(0) + int (I1 + I2 + I3) + tol``, the
    one-sided form that holds because ``I4 = -||rho||^2 <= 0``.
    """
    ledger = traj.ledger
    if len(ledger) < 2:
        raise DDMaxwellUserError(f"energy check needs at least 2 ledger rows, got {len(ledger)}.")
    t = ledger.column("t")
    energy = ledger.column("energy")
    dissipation = ledger.column("dissipation_rate")
    balance = ledger.column("balance_rate")
    residual = ledger_residuals(energy, balance - dissipation, t)
    worst = float(np.max(np.abs(residual)))

    dissipated = cumulative_trapezoid(dissipation, t)
    supplied = cumulative_trapezoid(ledger.column("signed_rate"), t)
    excess = energy + dissipated - energy[0] - supplied
    bound_margin = float(np.min(-excess))
    raw_excess = float(np.max(energy + dissipated - energy[0]))

    passed = worst <= tol and bound_margin >= -tol
    return CheckReport(
        name=CheckName.ENERGY.value,
        lhs=worst,
        rhs=0.0,
        margin=min(-worst, bound_margin),
        passed=passed,
        tolerance=tol,
        note=f"bound margin {bound_margin:.6e}; raw energy+dissipation excess {raw_excess:.6e}",
    )


def check_growth_bound(traj: TrajectoryRecord, constants: GrowthConstants) -> CheckReport:
    """
    ``||rho||_{L^1(0,t;H^1)} + ||(E, B)(t)||_{H^1} <= (1 + ||(E_0, B_0)||_{H^1}) exp(C0 (t + 1))``
    at every recorded time; the note carries the Duhamel bound
    ``||F(t)||_{H^1} <= ||F_0||_{H^1} + Z1 + Z2 + Z3 + Z4``.
    """
    _require_rows(traj, 1, "growth check")
    times = traj.times
    field_h1 = np.sqrt(traj.column("h1_E") ** 2 + traj.column("h1_B") ** 2)
    lhs = cumulative_trapezoid(traj.column("h1_rho"), times) + field_h1
    rhs = (1.0 + field_h1[0]) * np.exp(constants.c0 * (times - times[0] + 1.0))
    margins = rhs - lhs
    worst = int(np.argmin(margins))

    z = z_terms(traj)
    duhamel = field_h1[0] + z["z1"] + z["z2"] + z["z3"] + z["z4"] - field_h1
    return CheckReport.from_bound(
        CheckName.GROWTH.value,
        float(lhs[worst]),
        float(rhs[worst]),
        calibration_constant=constants.c_cal,
        note=f"C0={constants.c0:.6g}; Duhamel margin {float(np.min(duhamel)):.6e}",
    )


def gn_ratio(u: ScalarField) -> float:
    """``||u||_{L^4}^2 / (||u||_2 ||grad u||_2)``"""
    return lp_norm(u, 4) ** 2 / (sobolev_norm(u, 0) * gradient_l2(u))


def check_gn(corpus: Iterable[ScalarField], c_gn: float) -> CheckReport:
    """``||u||_{L^4}^2 <= C_GN ||u||_2 ||grad u||_2`` on zero-mean, nonconstant fields"""
    ratios = []
    excluded = 0
    for u in corpus:
        scale = max(1.0, float(np.max(np.abs(u.values))))
        if gradient_l2(u) == 0.0 or abs(u.mean) > ZERO_MEAN_TOLERANCE * scale:
            excluded += 1
            continue
        ratios.append(gn_ratio(u))
    worst = max(ratios, default=0.0)
    return CheckReport.from_bound(
        CheckName.GN.value,
        worst,
        c_gn,
        calibration_constant=c_gn,
        note=f"{len(ratios)} fields, {excluded} excluded (constant or nonzero mean)",
    )


def check_scalar_inequalities(samples: Sequence[Sequence[float]] | RealArray) -> CheckReport:
    """
    ``sqrt(a + b) <= sqrt(a) + b`` and ``log(a + b) <= log(a) + b`` for ``a >= 1, b >= 0``;
    pairs outside that range are rejected and counted in the note.
    """
    pairs = np.asarray(samples, dtype=np.float64).reshape(-1, 2)
    a, b = pairs[:, 0], pairs[:, 1]
    valid = (a >= 1.0) & (b >= 0.0) & np.isfinite(a) & np.isfinite(b)
    a, b = a[valid], b[valid]
    root_bound = np.sqrt(a) + b
    log_bound = np.log(a) + b
    root_excess = (np.sqrt(a + b) - root_bound) / np.maximum(1.0, root_bound)
    log_excess = (np.log(a + b) - log_bound) / np.maximum(1.0, np.abs(log_bound))
    worst = float(max(np.max(root_excess, initial=-np.inf), np.max(log_excess, initial=-np.inf)))
    worst = 0.0 if not math.isfinite(worst) else worst
    violations = int(np.sum(root_excess > SCALAR_TOLERANCE) + np.sum(log_excess > SCALAR_TOLERANCE))
    return CheckReport(
        name=CheckName.SCALAR.value,
        lhs=worst,
        rhs=0.0,
        margin=-worst,
        passed=violations == 0,
        tolerance=SCALAR_TOLERANCE,
        note=f"{int(valid.sum())} pairs, {violations} violations, {int((~valid).sum())} rejected",
    )


def chain_ratios(traj: TrajectoryRecord, grid_q_max: int) -> RealArray:
    """
    ``||rho||_inf / (||rho||_2 + N ||grad rho||_2 + 2^-N ||grad^2 rho||_2)`` per recorded row,
    ``N`` chosen as in :py:func:`~ddmaxwell.littlewood_paley.optimal_truncation`
    """
    linf = traj.column("linf_rho")
    l2 = traj.column("l2_rho")
    grad = traj.column("grad_rho_l2")
    hess = traj.column("hess_rho_l2")
    ratios = np.zeros_like(linf)
    for i in range(len(linf)):
        level = truncation_level(float(grad[i]), float(hess[i]), grid_q_max)
        total = l2[i] + level * grad[i] + 2.0**-level * hess[i]
        ratios[i] = linf[i] / total if total > 0 else 0.0
    return ratios


def check_lp_log_bound(
    traj: TrajectoryRecord,
    bank: DyadicFilterBank,
    constants: GrowthConstants,
    c_log: float,
    c_lp: float,
    grid_q_max: int,
) -> CheckReport:
    """
    Time-integrated logarithmic bound on ``||rho||_{L^1_t L^inf}`` with constant ``c_log``, plus the
    per-time interpolation chain with constant ``c_lp`` on every row and, when the trajectory kept
    its states, the block-sum line ``||rho||_inf <= ||S_1 rho||_inf + sum_q ||Delta_q rho||_inf``.
    """
    _require_rows(traj, 1, "Littlewood-Paley check")
    horizon = float(traj.times[-1] - traj.times[0])
    bound = trajectory_log_bound(traj, constants.c0, horizon, constant=c_log)
    chain = float(np.max(chain_ratios(traj, grid_q_max)))
    passed = bound["lhs"] <= bound["rhs"] and chain <= c_lp
    note = f"chain ratio {chain:.6g} <= C_LP={c_lp:g}"
    if traj.states:
        block_excess = 0.0
        for state in traj.states:
            level = optimal_truncation(state.rho)
            terms = linf_interpolation_bound(state.rho, level, bank)
            block_excess = max(block_excess, terms["lhs"] - terms["block_sum"])
        passed = passed and block_excess <= 1e-12 * max(1.0, float(np.max(traj.column("linf_rho"))))
        note += f"; block-sum excess {block_excess:.3e}"
    return CheckReport(
        name=CheckName.LP_LOG.value,
        lhs=bound["lhs"],
        rhs=bound["rhs"],
        margin=bound["rhs"] - bound["lhs"],
        passed=passed,
        calibration_constant=c_log,
        note=note,
    )


def bernstein_ratios(corpus: Iterable[ScalarField], bank: DyadicFilterBank) -> tuple[float, float]:
    """
    sup over fields and blocks of ``||Delta_q u||_inf / (2^q ||Delta_q u||_2)`` and of
    ``||Delta_q grad u||_2 / (2^q ||Delta_q u||_2)``
    """
    sup_ratio, grad_ratio = 0.0, 0.0
    for u in corpus:
        scale = sobolev_norm(u, 0)
        for q, piece in enumerate(decompose(u, bank).blocks, start=1):
            norm = sobolev_norm(piece, 0)
            if norm <= 1e-14 * scale or norm == 0.0:
                continue
            sup_ratio = max(sup_ratio, lp_norm(piece, math.inf) / (2.0**q * norm))
            grad_ratio = max(grad_ratio, sobolev_norm(gradient3(piece), 0) / (2.0**q * norm))
    return sup_ratio, grad_ratio


def check_bernstein(
    corpus: Iterable[ScalarField], bank: DyadicFilterBank, c_bernstein: float, c_bernstein_grad: float
) -> CheckReport:
    sup_ratio, grad_ratio = bernstein_ratios(corpus, bank)
    passed = sup_ratio <= c_bernstein and grad_ratio <= c_bernstein_grad
    return CheckReport(
        name=CheckName.BERNSTEIN.value,
        lhs=sup_ratio,
        rhs=c_bernstein,
        margin=min(c_bernstein - sup_ratio, c_bernstein_grad - grad_ratio),
        passed=passed,
        calibration_constant=c_bernstein,
        note=f"gradient ratio {grad_ratio:.6g} <= {c_bernstein_grad:g}",
    )


def contraction_rate(first: TrajectoryRecord, second: TrajectoryRecord, k_contraction: float) -> RealArray:
    """integrand of the Gronwall exponent of the difference of two runs"""
    linf_rho = first.column("linf_rho") + second.column("linf_rho")
    linf_e = first.column("linf_E") + second.column("linf_E")
    return linf_rho + k_contraction * (1.0 + linf_e + linf_rho) ** 2


def contraction_probe(
    initial: State,
    cfg: IntegratorConfig,
    delta: float,
    k_contraction: float,
    perturb_density: bool = True,
    seed: int = 0,
) -> CheckReport:
    """
    Twin runs from ``initial`` and a perturbation of relative size ``delta``; the squared
    distance ``D = ||d rho||^2 + ||d E||^2 + ||d B||^2`` must stay below
    ``D(0) exp(int (r + K (1 + e + r)^2))`` with ``r = |rho_1|_inf + |rho_2|_inf`` and
    ``e = |E_1|_inf + |E_2|_inf``.

    :param perturb_density: perturb ``rho`` (and re-solve Gauss's law for ``E``); otherwise
        perturb ``B`` by a divergence-free field
    :raises DDMaxwellBlowUpError: if either run blows up
    """
    if delta < 0:
        raise DDMaxwellUserError(f"delta must be non-negative, got {delta}.")
    grid = initial.grid
    rng = np.random.default_rng(seed)
    cutoff = cfg.cutoff
    radius = cutoff.radius if cutoff is not None else grid.dealias_radius
    if perturb_density:
        size = delta * max(1.0, sobolev_norm(initial.rho, 0))
        d_rho = band_limited_field(grid, rng, radius=radius, amplitude=size)
        electric = initial.E + solve_gauss_electric(d_rho)
        perturbed = State(initial.rho + d_rho, electric, initial.B, initial.time, initial.constrained)
    else:
        size = delta * max(1.0, sobolev_norm(initial.B, 0))
        d_b = divergence_free_field(grid, rng, radius=radius, amplitude=size)
        perturbed = State(initial.rho, initial.E, initial.B + d_b, initial.time, initial.constrained)
    perturbed = project_state(perturbed, cutoff)

    first = simulate(initial, cfg, keep_states=True)
    second = simulate(perturbed, cfg, keep_states=True)
    distance = np.array([state_distance(a, b) ** 2 for a, b in zip(first.states or [], second.states or [])])
    times = first.times
    exponent = cumulative_trapezoid(contraction_rate(first, second, k_contraction), times)
    envelope = distance[0] * np.exp(exponent)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = np.where(envelope > 0, distance / envelope, np.where(distance > 0, np.inf, 0.0))
    worst = float(np.max(ratios))

    horizon = float(times[-1] - times[0])
    measured = math.log(distance[-1] / distance[0]) / horizon if distance[0] > 0 and distance[-1] > 0 else 0.0
    d_rho_l2 = [sobolev_norm(a.rho - b.rho, 0) for a, b in zip(first.states or [], second.states or [])]
    d_rho_h1 = [sobolev_norm(a.rho - b.rho, 1) ** 2 for a, b in zip(first.states or [], second.states or [])]
    x_norm = max(d_rho_l2, default=0.0) + math.sqrt(trapezoid(d_rho_h1, times))
    return CheckReport.from_bound(
        CheckName.CONTRACTION.value,
        worst,
        1.0,
        tolerance=CONTRACTION_TOLERANCE,
        calibration_constant=k_contraction,
        note=(
            f"measured rate {measured:.6g}, envelope rate {exponent[-1] / horizon if horizon else 0.0:.6g}, "
            f"X-norm of difference {x_norm:.6e}"
        ),
    )


def check_gauss_transport(traj: TrajectoryRecord, tol: float = GAUSS_TOLERANCE) -> CheckReport:
    """``max_t ||div E - rho||`` and ``max_t ||div B||`` below ``tol``"""
    _require_rows(traj, 1, "Gauss check")
    e_worst = float(np.max(traj.column("gauss_e_residual")))
    b_worst = float(np.max(traj.column("div_b_residual")))
    return CheckReport.from_residual(
        CheckName.GAUSS.value, max(e_worst, b_worst), tol, note=f"e={e_worst:.3e} b={b_worst:.3e}"
    )


def check_maxwell_isometry(traj: TrajectoryRecord, tol: float = ISOMETRY_TOLERANCE) -> CheckReport:
    """relative drift of ``||E||^2 + ||B||^2`` on a trajectory with ``rho = 0``"""
    _require_rows(traj, 1, "isometry check")
    if float(np.max(traj.column("l2_rho"))) > 0.0:
        raise DDMaxwellUserError("The isometry check needs a trajectory with rho = 0.")
    norm_sq = traj.column("l2_E") ** 2 + traj.column("l2_B") ** 2
    drift = float(np.max(np.abs(norm_sq - norm_sq[0])) / norm_sq[0]) if norm_sq[0] > 0 else 0.0
    return CheckReport.from_residual(CheckName.ISOMETRY.value, drift, tol)


def check_h1_balance(
    traj: TrajectoryRecord, c_gn: float = 1.0, tol: float = H1_BALANCE_TOLERANCE
) -> CheckReport:
    """
    ``d/dt ||grad F||^2 / 2 + ||grad^2 rho||^2 - (J1 + ... + J6)`` per recorded row, the rate taken
    from the right-hand side (``h1_rate``), relative to the largest term; the Gronwall envelope
    margin goes to the note.

    The balance is exact up to quadrature aliasing and the Gauss residual, so any single ``J`` term
    with the wrong sign shows up at its own size.
    """
    _require_rows(traj, 2, "H^1 balance check")
    grad_f = traj.column("grad_F_l2_sq")
    rate = traj.column("h1_rate")
    hess = traj.column("hess_rho_l2") ** 2
    terms = [traj.column(f"J{i}") for i in range(1, 7)]
    residual = rate + hess - sum(terms)
    scale = max(float(np.max(np.abs(term))) for term in [rate, hess, *terms])
    worst = float(np.max(np.abs(residual))) / scale if scale > 0 else 0.0
    envelope_margin = float(np.min(gronwall_h1_envelope(traj, c_gn) - grad_f))
    return CheckReport.from_residual(
        CheckName.H1_BALANCE.value, worst, tol, note=f"Gronwall envelope margin {envelope_margin:.6e}"
    )


def check_cutoff_smoothing(corpus: Iterable[ScalarField], radii: Sequence[float]) -> CheckReport:
    """``||J_n u||_{H^s} <= (1 + k_n)^s ||u||_{L^2}`` for ``s = 1, 2`` and every radius"""
    worst = 0.0
    for u in corpus:
        base = sobolev_norm(u, 0)
        if base == 0.0:
            continue
        for radius in radii:
            op = CutoffOperator(radius)
            projected = ScalarField.from_spectrum(u.grid, op.apply_spectrum(u.grid, u.spectrum))
            for s in (1, 2):
                worst = max(worst, sobolev_norm(projected, s) / (op.smoothing_factor(u.grid, s) * base))
    return CheckReport.from_bound(
        CheckName.SMOOTHING.value, worst, 1.0, tolerance=1e-12, calibration_constant=1.0
    )


def check_h1_majorants(states: Iterable[State], c_gn: float) -> CheckReport:
    """``|J_i|`` against the Young/Gagliardo-Nirenberg majorants for ``i = 1, 2, 4, 5``"""
    worst, worst_term = 0.0, ""
    for state in states:
        terms = h1_balance_terms(state)
        for name, bound in h1_majorants(state, c_gn).items():
            value = abs(getattr(terms, name))
            ratio = value / bound if bound > 0 else (0.0 if value == 0 else math.inf)
            if ratio > worst:
                worst, worst_term = ratio, name
    return CheckReport.from_bound(
        CheckName.MAJORANTS.value,
        worst,
        1.0,
        calibration_constant=c_gn,
        note=f"tightest term {worst_term or '-'}",
    )


def log_report(report: CheckReport) -> None:
    summary = f"{report.name}: lhs={report.lhs:.6e} rhs={report.rhs:.6e} margin={report.margin:.6e}"
    if report.passed:
        logger.info(f"PASS {summary}")
    else:
        logger.error(f"FAIL {summary}")


__all__ = [
    "bernstein_ratios",
    "chain_ratios",
    "check_bernstein",
    "check_cutoff_smoothing",
    "check_energy_identity",
    "check_gauss_transport",
    "check_gn",
    "check_growth_bound",
    "check_h1_balance",
    "check_h1_majorants",
    "check_lp_log_bound",
    "check_maxwell_isometry",
    "check_scalar_inequalities",
    "contraction_probe",
    "contraction_rate",
    "gn_ratio",
    "ledger_residuals",
    "log_report",
]
