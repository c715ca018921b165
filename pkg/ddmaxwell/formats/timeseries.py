"""CSV writers: diagnostics time series, check reports, block tables and convergence distances"""

import csv
import io
from collections.abc import Iterable, Sequence
from pathlib import Path

from ddmaxwell.constants import TIMESERIES_COLUMNS
from ddmaxwell.helpers import atomic_write
from ddmaxwell.integrator import FriedrichsSequence
from ddmaxwell.models import CheckReport, TrajectoryRecord

REPORT_COLUMNS = ("name", "lhs", "rhs", "margin", "passed", "calibration_constant", "tolerance", "note")
BLOCK_COLUMNS = ("q", "ring_low", "ring_high", "l2", "linf", "grad_l2")
CONVERGENCE_COLUMNS = ("radius", "next_radius", "distance")


def format_float(value: float) -> str:
    """17 significant digits, enough to read back the identical double"""
    return f"{value:.17g}"


def _render(header: Sequence[str], rows: Iterable[Sequence[object]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_float(cell) if isinstance(cell, float) else cell for cell in row])
    return buffer.getvalue()


def timeseries_csv(traj: TrajectoryRecord) -> str:
    return _render(TIMESERIES_COLUMNS, ([float(row[c]) for c in TIMESERIES_COLUMNS] for row in traj.rows))


def write_timeseries(path: str | Path, traj: TrajectoryRecord) -> Path:
    return atomic_write(path, timeseries_csv(traj))


def reports_csv(reports: Iterable[CheckReport]) -> str:
    return _render(
        REPORT_COLUMNS,
        (
            [
                r.name,
                float(r.lhs),
                float(r.rhs),
                float(r.margin),
                "true" if r.passed else "false",
                "" if r.calibration_constant is None else float(r.calibration_constant),
                float(r.tolerance),
                r.note,
            ]
            for r in reports
        ),
    )


def write_reports(path: str | Path, reports: Iterable[CheckReport]) -> Path:
    return atomic_write(path, reports_csv(reports))


def write_block_table(path: str | Path, table: list[dict[str, float]]) -> Path:
    """``lp-analyze`` output; ``q`` is written as an integer"""
    rows = ([int(entry["q"]), *(float(entry[c]) for c in BLOCK_COLUMNS[1:])] for entry in table)
    return atomic_write(path, _render(BLOCK_COLUMNS, rows))


def write_convergence(path: str | Path, sequence: FriedrichsSequence) -> Path:
    rows = (
        [float(a), float(b), float(d)]
        for a, b, d in zip(sequence.radii, sequence.radii[1:], sequence.distances)
    )
    return atomic_write(path, _render(CONVERGENCE_COLUMNS, rows))
