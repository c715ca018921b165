"""custom exception classes for ddmaxwell"""

from collections.abc import Sequence


class DDMaxwellError(Exception):
    """base error class

    shall only be raised if none of the subclasses below are fitting
    """


class DDMaxwellUserError(DDMaxwellError):
    """error caused by invalid usage of ddmaxwell"""


class DDMaxwellConfigError(DDMaxwellUserError):
    """error caused by an invalid run configuration

    :param message: human readable description
    :param key: configuration key the error refers to, if any
    :param line: 1-based line number in the configuration text, if any
    """

    def __init__(self, message: str, key: str | None = None, line: int | None = None):
        self.key = key
        self.line = line
        location = ""
        if key is not None:
            location += f"[{key}]"
        if line is not None:
            location += f" (line {line})"
        super().__init__(f"{location.strip()} {message}".strip())


class DDMaxwellConstraintError(DDMaxwellUserError):
    """error caused by data violating a constraint of the system (Gauss law, zero mean, positivity)"""


class DDMaxwellIOError(DDMaxwellError):
    """error raised when an input file (configuration, snapshot, calibration) cannot be read"""


class DDMaxwellBlowUpError(DDMaxwellError):
    """error raised when the time step cannot satisfy the CFL bound anymore

    :param time: simulation time at which the step failed
    :param linf_rho: sup norm of the density at that time
    """

    def __init__(self, time: float, linf_rho: float, message: str = ""):
        self.time = time
        self.linf_rho = linf_rho
        #: partial trajectory, attached by :py:func:`ddmaxwell.integrator.simulate`
        self.trajectory: object | None = None
        super().__init__(
            message or f"Blow-up suspected at t={time:.6g}: CFL unsatisfiable, |rho|_inf={linf_rho:.6g}"
        )


class DDMaxwellVerificationError(DDMaxwellError):
    """error raised when at least one check of a verification suite fails"""

    def __init__(self, reports: Sequence[object]):
        self.reports = list(reports)
        failed = [getattr(r, "name", "?") for r in reports if not getattr(r, "passed", True)]
        super().__init__("Verification failed: " + ", ".join(failed))
