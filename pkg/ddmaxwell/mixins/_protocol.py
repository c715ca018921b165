"""protocol that defines the attributes and helpers available to mixins"""

from pathlib import Path
from typing import Any, Protocol

from ddmaxwell.dynamics import State
from ddmaxwell.formats.config import RunConfig
from ddmaxwell.integrator import IntegratorConfig
from ddmaxwell.littlewood_paley import DyadicFilterBank
from ddmaxwell.models import TrajectoryRecord
from ddmaxwell.spectral import Grid
from ddmaxwell.verification.calibration import Calibration


class MixinProtocol(Protocol):
    """protocol that defines the attributes and helpers available to mixins"""

    config: RunConfig

    grid: Grid

    bank: DyadicFilterBank

    calibration: Calibration

    output_dir: Path

    def _output_path(self, path: str | Path) -> Path:
        """resolves ``path`` against the output directory"""

    def _integrator_config(self, **changes: Any) -> IntegratorConfig:
        """integrator settings of the run configuration, with optional overrides"""

    def initial_state(self) -> State:
        """initial data of the configured preset"""

    def recalibrate(self, reference: TrajectoryRecord | None = None) -> Calibration:
        """measures the calibration constants and makes them current"""
