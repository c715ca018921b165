import logging

from ddmaxwell.exceptions import DDMaxwellBlowUpError
from ddmaxwell.formats.snapshot import SnapshotWriter
from ddmaxwell.formats.timeseries import write_timeseries
from ddmaxwell.integrator import simulate
from ddmaxwell.mixins._protocol import MixinProtocol
from ddmaxwell.models import TrajectoryRecord

logger = logging.getLogger(__name__)


class SimulationMixin(MixinProtocol):
    def run_simulation(self, keep_states: bool = False, write: bool = True) -> TrajectoryRecord:
        """
        Integrate the configured initial data up to ``time.t_end``.

        With ``write`` set, the diagnostics go to ``output.timeseries_path`` and, when
        ``output.snapshot_dir`` is configured, a DDMX snapshot is written every
        ``output.snapshot_every`` steps and at the final time.

        :param keep_states: keep the recorded states in the returned trajectory
        :param write: write the time series and snapshots
        :return: the recorded trajectory
        :raises DDMaxwellBlowUpError: if the CFL bound cannot be met; the partial time series is
            still written
        """
        cfg = self.config
        sink = None
        if write and cfg.output_snapshot_dir is not None:
            sink = SnapshotWriter(self._output_path(cfg.output_snapshot_dir))
        try:
            traj = simulate(
                self.initial_state(),
                self._integrator_config(),
                keep_states=keep_states,
                snapshot_sink=sink,
                snapshot_every=cfg.output_snapshot_every,
            )
        except DDMaxwellBlowUpError as error:
            partial = error.trajectory
            if write and isinstance(partial, TrajectoryRecord) and len(partial):
                write_timeseries(self._output_path(cfg.output_timeseries_path), partial)
            raise
        if write:
            path = write_timeseries(self._output_path(cfg.output_timeseries_path), traj)
            logger.info(f"Wrote {len(traj)} rows to {path}")
        return traj
