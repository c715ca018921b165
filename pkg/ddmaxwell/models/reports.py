from dataclasses import dataclass
from typing import TypedDict

from ddmaxwell.exceptions import DDMaxwellUserError


@dataclass
class CheckReport:
    """Outcome of one verification check.

    :param name: check name, see :py:class:`~ddmaxwell.enums.CheckName`
    :param lhs: measured side of the identity or inequality
    :param rhs: bound or reference value
    :param margin: ``rhs - lhs`` for inequalities, minus the residual for identities
    :param passed: ``margin >= -tolerance``
    :param calibration_constant: constant the bound was evaluated with, if any
    :param tolerance: absolute tolerance granted to the margin
    :param note: free-form details (secondary margins, rejected samples)
    """

    name: str
    lhs: float
    rhs: float
    margin: float
    passed: bool
    calibration_constant: float | None = None
    tolerance: float = 0.0
    note: str = ""

    @classmethod
    def from_bound(
        cls,
        name: str,
        lhs: float,
        rhs: float,
        tolerance: float = 0.0,
        calibration_constant: float | None = None,
        note: str = "",
    ) -> "CheckReport":
        """Report for ``lhs <= rhs``"""
        margin = rhs - lhs
        return cls(name, lhs, rhs, margin, margin >= -tolerance, calibration_constant, tolerance, note)

    @classmethod
    def from_residual(cls, name: str, residual: float, tolerance: float, note: str = "") -> "CheckReport":
        """Report for an identity whose residual must stay below ``tolerance``"""
        residual = abs(residual)
        return cls.from_bound(name, residual, 0.0, tolerance=tolerance, note=note)


@dataclass(kw_only=True)
class GrowthConstants:
    """
    Constants of the H^1 growth bound.

    :param c_cal: calibration constant ``C``
    :param initial_energy: ``||rho_0||^2 + ||E_0||^2 + ||B_0||^2``
    """

    c_cal: float
    initial_energy: float

    def __post_init__(self) -> None:
        if self.c_cal <= 0:
            raise DDMaxwellUserError(f"Calibration constant must be positive, got {self.c_cal}.")

    @property
    def c0(self) -> float:
        return self.c_cal * (self.initial_energy + 1.0)


class GaussResiduals(TypedDict):
    e_residual: float
    b_residual: float


class EntropyFlux(TypedDict):
    h_l2: float


class LogBound(TypedDict):
    lhs: float
    rhs: float
    grad_l2t: float
    hess_l2t: float


class InterpolationBound(TypedDict):
    lhs: float
    l2: float
    grad_term: float
    hess_term: float
    block_sum: float
