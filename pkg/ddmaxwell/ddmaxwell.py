from dataclasses import replace
from pathlib import Path
from typing import Any

from ddmaxwell.dynamics import State
from ddmaxwell.enums import Preset
from ddmaxwell.formats.config import RunConfig, read_config
from ddmaxwell.integrator import IntegratorConfig
from ddmaxwell.littlewood_paley import DyadicFilterBank, build_filter_bank
from ddmaxwell.mixins.analysis import AnalysisMixin
from ddmaxwell.mixins.calibration import CalibrationMixin
from ddmaxwell.mixins.convergence import ConvergenceMixin
from ddmaxwell.mixins.simulation import SimulationMixin
from ddmaxwell.mixins.verification import VerificationMixin
from ddmaxwell.presets import build_initial_state
from ddmaxwell.spectral import Grid
from ddmaxwell.verification.calibration import Calibration, load_calibration


class DDMaxwellBase:
    def __init__(
        self,
        config: RunConfig | str | Path | None = None,
        output_dir: str | Path | None = None,
        calibration: Calibration | None = None,
        smoothness: int = 2,
    ):
        """
        Create a new runner for one configuration of the drift-diffusion-Maxwell system.

        :param config: Optional. A :py:class:`~ddmaxwell.formats.config.RunConfig` or the path of a
          ``key=value`` configuration file. Default: all defaults.
        :param output_dir: Optional. Directory that relative output paths are resolved against.
          Default: the current directory.
        :param calibration: Optional. Calibration constants for the inequality checks.
          Default: ``verify.calibration_path`` if configured, otherwise the packaged constants.
        :param smoothness: smoothness of the Littlewood-Paley profile, 1 (cubic) or 2 (quintic)
        """
        if not isinstance(config, RunConfig):
            config = read_config(config)
        self.config: RunConfig = config
        self.grid: Grid = config.grid
        self.bank: DyadicFilterBank = build_filter_bank(smoothness)
        self.output_dir = Path(output_dir) if output_dir is not None else Path.cwd()
        if calibration is None:
            calibration = load_calibration(config.verify_calibration_path)
        self.calibration: Calibration = calibration
        self._initial: State | None = None

    def _output_path(self, path: str | Path) -> Path:
        candidate = Path(path)
        return candidate if candidate.is_absolute() else self.output_dir / candidate

    def _integrator_config(self, **changes: Any) -> IntegratorConfig:
        cfg = self.config
        settings = IntegratorConfig(
            dt=cfg.time_dt,
            t_end=cfg.time_t_end,
            cutoff_radius=cfg.cutoff_n,
            cfl_safety=cfg.time_cfl_safety,
            record_every=cfg.record_every,
            coupled=cfg.init_preset != Preset.HEAT_ONLY,
        )
        return replace(settings, **changes) if changes else settings

    def initial_state(self) -> State:
        """initial data of the configured preset, built once and reused"""
        if self._initial is None:
            self._initial = build_initial_state(self.config)
        return self._initial


class DDMaxwell(
    DDMaxwellBase,
    SimulationMixin,
    VerificationMixin,
    AnalysisMixin,
    ConvergenceMixin,
    CalibrationMixin,
):
    """
    Allows simulating the drift-diffusion-Maxwell system on the periodic square and
    verifying its energy identities and a priori bounds.
    Each subcommand of the ``ddmaxwell`` console script is one method of this class.

    Example::

        from ddmaxwell import DDMaxwell
        runner = DDMaxwell("run.cfg", output_dir="out")
        traj = runner.run_simulation()
        reports = runner.verify(["energy", "gauss"])
    """
