from .reports import CheckReport, EntropyFlux, GaussResiduals, GrowthConstants, InterpolationBound, LogBound
from .trajectory import EnergyLedger, TrajectoryRecord

__all__ = [
    "CheckReport",
    "EnergyLedger",
    "EntropyFlux",
    "GaussResiduals",
    "GrowthConstants",
    "InterpolationBound",
    "LogBound",
    "TrajectoryRecord",
]
