from dataclasses import dataclass, field
from pathlib import Path
from typing import TYPE_CHECKING

import numpy as np

from ddmaxwell.constants import AUXILIARY_COLUMNS, TIMESERIES_COLUMNS
from ddmaxwell.exceptions import DDMaxwellUserError
from ddmaxwell.type_alias import Diagnostics, RealArray

if TYPE_CHECKING:
    from ddmaxwell.dynamics import State

LEDGER_COLUMNS = ("t", "energy", "dissipation_rate", "balance_rate", "signed_rate")


@dataclass
class EnergyLedger:
    """Per-step energy bookkeeping of a run.

    :param t: step times, starting at the initial time
    :param energy: ``(||rho||^2 + ||E||^2 + ||B||^2) / 2``
    :param dissipation_rate: ``||grad rho||^2``
    :param balance_rate: ``I1 + I2 + I3 + I4``, the exact right side of the energy balance
    :param signed_rate: ``I1 + I2 + I3``, the part that survives after dropping ``I4 <= 0``
    """

    t: list[float] = field(default_factory=list)
    energy: list[float] = field(default_factory=list)
    dissipation_rate: list[float] = field(default_factory=list)
    balance_rate: list[float] = field(default_factory=list)
    signed_rate: list[float] = field(default_factory=list)

    def append(self, t: float, energy: float, dissipation: float, balance: float, signed: float) -> None:
        self.t.append(t)
        self.energy.append(energy)
        self.dissipation_rate.append(dissipation)
        self.balance_rate.append(balance)
        self.signed_rate.append(signed)

    def __len__(self) -> int:
        return len(self.t)

    def column(self, name: str) -> RealArray:
        if name not in LEDGER_COLUMNS:
            raise DDMaxwellUserError(f"Unknown ledger column {name!r}.")
        return np.asarray(getattr(self, name), dtype=np.float64)


@dataclass
class TrajectoryRecord:
    """
    Diagnostics of one simulation, one row per recorded step.

    :param rows: one mapping per recorded time, keyed by :py:data:`~ddmaxwell.constants.TIMESERIES_COLUMNS`
    :param ledger: per-step energy ledger (finer than ``rows``)
    :param states: recorded states, only kept when requested
    :param cutoff_radius: Friedrichs radius of the run, ``None`` without cutoff
    :param snapshots: paths of the snapshot files written during the run
    """

    rows: list[Diagnostics] = field(default_factory=list)
    ledger: EnergyLedger = field(default_factory=EnergyLedger)
    states: list["State"] | None = None
    cutoff_radius: float | None = None
    snapshots: list[Path] = field(default_factory=list)

    def append(self, row: Diagnostics, state: "State | None" = None) -> None:
        """
        :raises DDMaxwellUserError: if the row does not advance in time
        """
        if self.rows and row["t"] <= self.rows[-1]["t"]:
            previous = self.rows[-1]["t"]
            raise DDMaxwellUserError(f"Trajectory times must increase: {row['t']} after {previous}.")
        self.rows.append(row)
        if self.states is not None and state is not None:
            self.states.append(state)

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def times(self) -> RealArray:
        return self.column("t")

    def column(self, name: str) -> RealArray:
        if name not in TIMESERIES_COLUMNS and name not in AUXILIARY_COLUMNS:
            raise DDMaxwellUserError(f"Unknown diagnostics column {name!r}.")
        return np.asarray([row[name] for row in self.rows], dtype=np.float64)

    @property
    def final_time(self) -> float:
        return self.rows[-1]["t"] if self.rows else 0.0
