"""Versioned constants of the inequality checks, and the explicit recalibration that refreshes them"""

import csv
import io
import logging
import math
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from ddmaxwell.constants import CALIBRATION_COLUMNS, CALIBRATION_SAFETY, DEFAULT_CORPUS_SIZE
from ddmaxwell.exceptions import DDMaxwellConfigError, DDMaxwellIOError
from ddmaxwell.helpers import atomic_write, package_version
from ddmaxwell.littlewood_paley import DyadicFilterBank, q_max, trajectory_log_bound, truncation_level
from ddmaxwell.models import GrowthConstants, TrajectoryRecord
from ddmaxwell.spectral import Grid, ScalarField, gradient_l2, hessian_l2, lp_norm, sobolev_norm
from ddmaxwell.verification.checks import bernstein_ratios, chain_ratios, gn_ratio
from ddmaxwell.verification.corpus import field_corpus

logger = logging.getLogger(__name__)

DEFAULT_CALIBRATION_PATH = Path(__file__).parent.parent.resolve() / "data" / "calibration.csv"

CONSTANT_NAMES = ("C_GN", "C_BERNSTEIN", "C_BERNSTEIN_GRAD", "C_LP", "C_LOG", "C_CAL", "K_CONTRACTION")

# constants fixed by analysis, carried over unchanged by calibrate()
ANALYTIC_CONSTANTS = ("C_CAL", "K_CONTRACTION")


@dataclass(frozen=True)
class Calibration:
    """
    Calibrated constants with their provenance notes.

    :param values: constant name -> value, one entry per name in :py:data:`CONSTANT_NAMES`
    :param notes: constant name -> provenance (version, seed, timestamp, corpus size)
    :param source: file the constants were read from, if any
    """

    values: dict[str, float]
    notes: dict[str, str] = field(default_factory=dict)
    source: Path | None = None

    def __getitem__(self, name: str) -> float:
        try:
            return self.values[name]
        except KeyError:
            raise DDMaxwellConfigError(f"unknown calibration constant {name!r}", key=name)

    def growth_constants(self, initial_energy: float) -> GrowthConstants:
        return GrowthConstants(c_cal=self["C_CAL"], initial_energy=initial_energy)

    def to_csv(self) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(CALIBRATION_COLUMNS)
        for name in CONSTANT_NAMES:
            writer.writerow([name, repr(self.values[name]), self.notes.get(name, "")])
        return buffer.getvalue()

    def write(self, path: str | Path) -> Path:
        """Write the constants atomically; returns the resolved path"""
        target = atomic_write(path, self.to_csv())
        logger.info(f"Wrote calibration constants to {target}")
        return target


def parse_calibration(text: str, source: Path | None = None) -> Calibration:
    """
    :raises DDMaxwellConfigError: on a wrong header, a missing or unknown constant, or a value
        that is not a positive finite number, with the constant name and line number
    """
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or tuple(rows[0]) != CALIBRATION_COLUMNS:
        raise DDMaxwellConfigError(f"calibration header must be {','.join(CALIBRATION_COLUMNS)}", line=1)
    values: dict[str, float] = {}
    notes: dict[str, str] = {}
    for line, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != 3:
            raise DDMaxwellConfigError(f"expected 3 columns, got {len(row)}", line=line)
        name, raw, note = row
        if name not in CONSTANT_NAMES:
            raise DDMaxwellConfigError("unknown calibration constant", key=name, line=line)
        try:
            value = float(raw)
        except ValueError:
            raise DDMaxwellConfigError(f"not a number: {raw!r}", key=name, line=line)
        if not (math.isfinite(value) and value > 0):
            raise DDMaxwellConfigError(f"must be positive and finite, got {raw}", key=name, line=line)
        values[name] = value
        notes[name] = note
    missing = [name for name in CONSTANT_NAMES if name not in values]
    if missing:
        raise DDMaxwellConfigError(f"missing calibration constants {', '.join(missing)}")
    return Calibration(values, notes, source)


def load_calibration(path: str | Path | None = None) -> Calibration:
    """
    Read a calibration file, the packaged one by default

    :raises DDMaxwellIOError: if the file cannot be read
    """
    target = Path(path) if path is not None else DEFAULT_CALIBRATION_PATH
    try:
        text = target.read_text(encoding="utf-8")
    except OSError as error:
        raise DDMaxwellIOError(f"Cannot read calibration {target}: {error}") from error
    return parse_calibration(text, source=target)


def _chain_ratio(u: ScalarField, top: int) -> float:
    grad, hess = gradient_l2(u), hessian_l2(u)
    level = truncation_level(grad, hess, top)
    total = sobolev_norm(u, 0) + level * grad + 2.0**-level * hess
    return lp_norm(u, math.inf) / total if total > 0 else 0.0


def _log_constant(traj: TrajectoryRecord, c0: float) -> float:
    """smallest ``C`` for which the logarithmic trajectory bound holds on ``traj``"""
    horizon = float(traj.times[-1] - traj.times[0])
    bound = trajectory_log_bound(traj, c0, horizon, constant=1.0)
    log_term = bound["rhs"] - math.sqrt(c0 * horizon)
    if log_term <= 0.0:
        return 0.0
    return max(0.0, (bound["lhs"] - math.sqrt(c0 * horizon)) / log_term)


def calibrate(
    grid: Grid,
    bank: DyadicFilterBank,
    base: Calibration,
    reference: TrajectoryRecord | None = None,
    seed: int = 0,
    corpus_size: int = DEFAULT_CORPUS_SIZE,
    safety: float = CALIBRATION_SAFETY,
) -> Calibration:
    """
    Measure the corpus constants (GN, Bernstein, interpolation chain) and, given a reference
    trajectory, the logarithmic-bound constant; each is the measured maximum times ``safety``.
    ``C_CAL`` and ``K_CONTRACTION`` are analytic and copied from ``base``; so is ``C_LOG``
    without a reference trajectory.

    :param base: constants to start from
    :param reference: trajectory to calibrate ``C_LOG`` (and the chain constant) on
    :param seed: corpus seed, recorded in the provenance note
    """
    corpus = field_corpus(grid, seed, corpus_size)
    top = q_max(grid)
    sup_ratio, grad_ratio = bernstein_ratios(corpus, bank)
    measured = {
        "C_GN": max(gn_ratio(u) for u in corpus),
        "C_BERNSTEIN": sup_ratio,
        "C_BERNSTEIN_GRAD": grad_ratio,
        "C_LP": max(_chain_ratio(u, top) for u in corpus),
    }
    if reference is not None and len(reference) > 1:
        measured["C_LP"] = max(measured["C_LP"], float(np.max(chain_ratios(reference, top))))
        first = reference.rows[0]
        initial_energy = first["l2_rho"] ** 2 + first["l2_E"] ** 2 + first["l2_B"] ** 2
        measured["C_LOG"] = _log_constant(reference, base.growth_constants(initial_energy).c0)

    stamp = datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")
    provenance = f"ddmaxwell {package_version()}; seed {seed}; corpus {corpus_size}; {stamp}"
    values = dict(base.values)
    notes = dict(base.notes)
    for name, value in measured.items():
        # a degenerate measurement (0) keeps the previous constant
        values[name] = safety * value if value > 0 else base[name]
        notes[name] = f"measured max {value:.6g} x {safety:g}; {provenance}"
        logger.info(f"Calibrated {name} = {values[name]:.6g} (measured {value:.6g})")
    for name in ANALYTIC_CONSTANTS:
        values[name] = base[name]
    return replace(base, values=values, notes=notes, source=None)


__all__ = [
    "CONSTANT_NAMES",
    "DEFAULT_CALIBRATION_PATH",
    "Calibration",
    "calibrate",
    "load_calibration",
    "parse_calibration",
]
