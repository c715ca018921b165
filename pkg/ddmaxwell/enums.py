from enum import Enum, IntEnum


class Preset(str, Enum):
    """initial-condition presets of :py:func:`ddmaxwell.presets.build_initial_state`"""

    DIPOLE = "dipole"
    GAUSSIAN_PAIR = "gaussian_pair"
    BAND_LIMITED_RANDOM = "band_limited_random"
    MAXWELL_ONLY = "maxwell_only"
    HEAT_ONLY = "heat_only"


class CheckName(str, Enum):
    ENERGY = "energy"
    GROWTH = "growth"
    GN = "gn"
    SCALAR = "scalar"
    LP_LOG = "lp_log"
    BERNSTEIN = "bernstein"
    CONTRACTION = "contraction"
    GAUSS = "gauss"
    ISOMETRY = "isometry"
    H1_BALANCE = "h1_balance"
    SMOOTHING = "smoothing"
    MAJORANTS = "majorants"


class ExitCode(IntEnum):
    OK = 0
    CONFIG = 1
    RUNTIME = 2
    VERIFICATION = 3
