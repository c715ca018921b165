import logging
from pathlib import Path

from ddmaxwell.formats.snapshot import read_snapshot
from ddmaxwell.formats.timeseries import write_block_table
from ddmaxwell.littlewood_paley import block_table, linf_interpolation_bound, optimal_truncation
from ddmaxwell.mixins._protocol import MixinProtocol

logger = logging.getLogger(__name__)


class AnalysisMixin(MixinProtocol):
    def lp_analyze(self, snapshot: str | Path | None = None) -> list[dict[str, float]]:
        """
        Littlewood-Paley block norms of the density, written to ``lp_blocks.csv``.

        :param snapshot: DDMX snapshot to analyze; the configured initial data if omitted
        :return: one row per piece, the ``S_1`` part first (``q = 0``), then ``Delta_1 .. Delta_Q``
        """
        state = read_snapshot(snapshot, constrained=False) if snapshot is not None else self.initial_state()
        rho = state.rho
        table = block_table(rho, self.bank)
        level = optimal_truncation(rho)
        bound = linf_interpolation_bound(rho, level, self.bank)
        logger.info(
            f"t={state.time:.6g}: |rho|_inf={bound['lhs']:.6e}, block sum {bound['block_sum']:.6e}, "
            f"truncation level {level}"
        )
        write_block_table(self._output_path("lp_blocks.csv"), table)
        return table
