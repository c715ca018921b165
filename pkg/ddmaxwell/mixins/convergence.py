import logging
from collections.abc import Sequence

from ddmaxwell.formats.config import override
from ddmaxwell.formats.timeseries import write_convergence
from ddmaxwell.integrator import FriedrichsSequence, friedrichs_sequence
from ddmaxwell.mixins._protocol import MixinProtocol
from ddmaxwell.presets import build_initial_state

logger = logging.getLogger(__name__)


class ConvergenceMixin(MixinProtocol):
    def converge(self, radii: Sequence[float] | None = None) -> FriedrichsSequence:
        """
        Runs the cutoff system for increasing radii from the untruncated initial data and writes
        the sup-in-time distances of consecutive members to ``convergence.csv``.

        :param radii: strictly increasing radii, defaults to ``converge.radii``
        :return: the trajectories and distances, ordered by radius
        """
        cfg = self.config
        initial = build_initial_state(override(cfg, cutoff_n=None))
        chosen = list(radii if radii is not None else cfg.converge_radii)
        sequence = friedrichs_sequence(initial, self._integrator_config(cutoff_radius=None), chosen)
        write_convergence(self._output_path("convergence.csv"), sequence)
        for (coarse, fine), distance in zip(zip(chosen, chosen[1:]), sequence.distances):
            logger.info(f"n={coarse:g} -> n={fine:g}: sup_t distance {distance:.6e}")
        return sequence
