import logging
from collections.abc import Callable, Iterable
from concurrent.futures import ThreadPoolExecutor

from ddmaxwell.enums import CheckName, Preset
from ddmaxwell.exceptions import DDMaxwellVerificationError
from ddmaxwell.formats.config import override
from ddmaxwell.formats.timeseries import write_reports
from ddmaxwell.helpers import fft_workers
from ddmaxwell.integrator import simulate
from ddmaxwell.littlewood_paley import q_max
from ddmaxwell.mixins._protocol import MixinProtocol
from ddmaxwell.models import CheckReport, GrowthConstants, TrajectoryRecord
from ddmaxwell.presets import build_initial_state
from ddmaxwell.verification import (
    check_bernstein,
    check_cutoff_smoothing,
    check_energy_identity,
    check_gauss_transport,
    check_gn,
    check_growth_bound,
    check_h1_balance,
    check_h1_majorants,
    check_lp_log_bound,
    check_maxwell_isometry,
    check_scalar_inequalities,
    contraction_probe,
    field_corpus,
    log_report,
    scalar_samples,
    state_corpus,
)

logger = logging.getLogger(__name__)

#: checks that run on the reference trajectory of the configuration
TRAJECTORY_CHECKS = frozenset(
    {CheckName.ENERGY, CheckName.GROWTH, CheckName.LP_LOG, CheckName.GAUSS, CheckName.H1_BALANCE}
)
ISOMETRY_STEPS = 1000


class VerificationMixin(MixinProtocol):
    def reference_trajectory(self) -> TrajectoryRecord:
        """The configured run with its recorded states kept, as used by the trajectory checks"""
        return simulate(self.initial_state(), self._integrator_config(), keep_states=True)

    def isometry_trajectory(self) -> TrajectoryRecord:
        """
        Companion vacuum Maxwell run (``maxwell_only`` data, decoupled) of 1000 steps on the
        configured grid
        """
        cfg = self.config
        companion = build_initial_state(override(cfg, init_preset=Preset.MAXWELL_ONLY))
        integrator = self._integrator_config(
            t_end=ISOMETRY_STEPS * cfg.time_dt, record_every=ISOMETRY_STEPS // 10, coupled=False
        )
        return simulate(companion, integrator)

    def verify(
        self,
        suite: Iterable[CheckName | str] | None = None,
        reference: TrajectoryRecord | None = None,
        raise_on_failure: bool = True,
    ) -> list[CheckReport]:
        """
        Run a suite of checks against the stored calibration constants and write the reports to
        ``reports.csv`` in the output directory.

        With ``verify.calibrate`` set the constants are refreshed first from the reference run.

        :param suite: check names, defaults to ``verify.suite``
        :param reference: trajectory of the configured run; simulated when needed and not given
        :param raise_on_failure: raise if any check fails
        :return: one report per check, in suite order
        :raises DDMaxwellVerificationError: if a check fails and ``raise_on_failure`` is set
        :raises DDMaxwellBlowUpError: if a required simulation blows up
        """
        cfg = self.config
        names = [CheckName(name) for name in suite] if suite is not None else list(cfg.verify_suite)
        grid, bank, seed = self.grid, self.bank, cfg.init_seed
        calibrate_first = cfg.verify_calibrate
        if reference is None and (calibrate_first or TRAJECTORY_CHECKS.intersection(names)):
            reference = self.reference_trajectory()
        if calibrate_first:
            self.recalibrate(reference=reference)
        calibration = self.calibration

        def trajectory() -> TrajectoryRecord:
            assert reference is not None
            return reference

        def growth_constants() -> GrowthConstants:
            first = trajectory().rows[0]
            initial_energy = first["l2_rho"] ** 2 + first["l2_E"] ** 2 + first["l2_B"] ** 2
            return calibration.growth_constants(initial_energy)

        radii = sorted({*cfg.converge_radii, *([cfg.cutoff_n] if cfg.cutoff_n is not None else [])})
        checks: dict[CheckName, Callable[[], CheckReport]] = {
            CheckName.ENERGY: lambda: check_energy_identity(trajectory()),
            CheckName.GROWTH: lambda: check_growth_bound(trajectory(), growth_constants()),
            CheckName.GN: lambda: check_gn(field_corpus(grid, seed), calibration["C_GN"]),
            CheckName.SCALAR: lambda: check_scalar_inequalities(scalar_samples(seed)),
            CheckName.LP_LOG: lambda: check_lp_log_bound(
                trajectory(), bank, growth_constants(), calibration["C_LOG"], calibration["C_LP"], q_max(grid)
            ),
            CheckName.BERNSTEIN: lambda: check_bernstein(
                field_corpus(grid, seed), bank, calibration["C_BERNSTEIN"], calibration["C_BERNSTEIN_GRAD"]
            ),
            CheckName.CONTRACTION: lambda: contraction_probe(
                self.initial_state(),
                self._integrator_config(),
                cfg.contraction_delta,
                calibration["K_CONTRACTION"],
                seed=seed,
            ),
            CheckName.GAUSS: lambda: check_gauss_transport(trajectory()),
            CheckName.ISOMETRY: lambda: check_maxwell_isometry(self.isometry_trajectory()),
            CheckName.H1_BALANCE: lambda: check_h1_balance(trajectory(), calibration["C_GN"]),
            CheckName.SMOOTHING: lambda: check_cutoff_smoothing(field_corpus(grid, seed), radii),
            CheckName.MAJORANTS: lambda: check_h1_majorants(state_corpus(grid, seed), calibration["C_GN"]),
        }

        logger.info(f"Running checks {', '.join(name.value for name in names)}")
        with ThreadPoolExecutor(max_workers=fft_workers()) as pool:
            reports = list(pool.map(lambda name: checks[name](), names))
        for report in reports:
            log_report(report)
        write_reports(self._output_path("reports.csv"), reports)

        if raise_on_failure and not all(report.passed for report in reports):
            raise DDMaxwellVerificationError(reports)
        return reports
