from importlib.metadata import PackageNotFoundError, version

from ddmaxwell.ddmaxwell import DDMaxwell
from ddmaxwell.dynamics import State
from ddmaxwell.enums import CheckName, Preset
from ddmaxwell.formats.config import RunConfig, parse_config
from ddmaxwell.integrator import IntegratorConfig, simulate

try:
    __version__ = version("ddmaxwell")
except PackageNotFoundError:
    # package is not installed
    pass

__license__ = "MIT"
__title__ = "ddmaxwell"
__all__ = [
    "CheckName",
    "DDMaxwell",
    "IntegratorConfig",
    "Preset",
    "RunConfig",
    "State",
    "parse_config",
    "simulate",
]
