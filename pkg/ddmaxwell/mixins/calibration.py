from ddmaxwell.integrator import simulate
from ddmaxwell.mixins._protocol import MixinProtocol
from ddmaxwell.models import TrajectoryRecord
from ddmaxwell.verification.calibration import Calibration, calibrate


class CalibrationMixin(MixinProtocol):
    def recalibrate(self, reference: TrajectoryRecord | None = None) -> Calibration:
        """
        Measure the calibration constants on fresh corpora (seed ``init.seed``) and on
        ``reference``, write them to ``verify.calibration_path`` (``calibration.csv`` in the
        output directory by default) and use them from now on.

        Checks never recalibrate on their own; this is the only place constants change.

        :param reference: trajectory for the trajectory constant; the configured run if omitted
        :return: the new constants
        """
        cfg = self.config
        if reference is None:
            reference = simulate(self.initial_state(), self._integrator_config())
        updated = calibrate(self.grid, self.bank, self.calibration, reference, seed=cfg.init_seed)
        target = self._output_path(cfg.verify_calibration_path or "calibration.csv")
        updated.write(target)
        self.calibration = Calibration(updated.values, updated.notes, target)
        return self.calibration
