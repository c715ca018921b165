import math
import os
import tempfile
from importlib.metadata import PackageNotFoundError, version
from pathlib import Path

import numpy as np
import scipy.fft

from ddmaxwell.constants import PHI_SERIES_RADIUS, PHI_SERIES_TERMS, THREADS_ENV_VAR
from ddmaxwell.exceptions import DDMaxwellUserError
from ddmaxwell.type_alias import ComplexArray, RealArray


def fft_workers() -> int:
    """Number of threads a single transform may use, capped by ``DDMX_THREADS``"""
    raw = os.environ.get(THREADS_ENV_VAR, "1")
    try:
        workers = int(raw)
    except ValueError:
        raise DDMaxwellUserError(f"{THREADS_ENV_VAR} must be a positive integer, got {raw!r}")
    return max(1, workers)


def forward(values: RealArray) -> ComplexArray:
    """Real 2D transform over the last two axes (unnormalized, half spectrum on the last axis)"""
    return scipy.fft.rfft2(values, axes=(-2, -1), workers=fft_workers())


def backward(spectrum: ComplexArray, n: int) -> RealArray:
    """Inverse of :py:func:`forward` for an ``n`` x ``n`` grid"""
    return scipy.fft.irfft2(spectrum, s=(n, n), axes=(-2, -1), workers=fft_workers())


def trapezoid(values: RealArray | list[float], times: RealArray | list[float]) -> float:
    """Time quadrature used for every L^1_t and L^2_t norm"""
    y = np.asarray(values, dtype=np.float64)
    t = np.asarray(times, dtype=np.float64)
    if y.size < 2:
        return 0.0
    return float(np.sum(0.5 * (y[1:] + y[:-1]) * np.diff(t)))


def cumulative_trapezoid(values: RealArray | list[float], times: RealArray | list[float]) -> RealArray:
    """Running trapezoid integral, starting at 0 for the first sample"""
    y = np.asarray(values, dtype=np.float64)
    t = np.asarray(times, dtype=np.float64)
    out = np.zeros_like(y)
    if y.size > 1:
        out[1:] = np.cumsum(0.5 * (y[1:] + y[:-1]) * np.diff(t))
    return out


def phi_functions(z: ComplexArray) -> tuple[ComplexArray, ComplexArray, ComplexArray]:
    """
    Exponential-integrator coefficients for a diagonal operator

    :param z: ``dt`` times the eigenvalues
    :return: ``(exp(z), phi_1(z), phi_2(z))`` with ``phi_1 = (e^z - 1)/z`` and
        ``phi_2 = (e^z - 1 - z)/z^2``; small ``|z|`` uses the Taylor series
    """
    z = np.asarray(z, dtype=np.complex128)
    ez = np.exp(z)
    small = np.abs(z) < PHI_SERIES_RADIUS
    safe = np.where(small, 1.0, z)
    phi1 = (ez - 1.0) / safe
    phi2 = (ez - 1.0 - safe) / safe**2

    series1 = np.zeros_like(z)
    series2 = np.zeros_like(z)
    power = np.ones_like(z)
    for m in range(PHI_SERIES_TERMS):
        series1 += power / math.factorial(m + 1)
        series2 += power / math.factorial(m + 2)
        power = power * z
    phi1 = np.where(small, series1, phi1)
    phi2 = np.where(small, series2, phi2)
    return ez, phi1, phi2


def atomic_write(path: str | Path, data: bytes | str) -> Path:
    """
    Write ``data`` to ``path`` through a temporary file in the same directory and a rename,
    so readers never see a partial file.

    :return: the resolved target path
    """
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    payload = data.encode("utf-8") if isinstance(data, str) else data
    fd, tmp_name = tempfile.mkstemp(prefix=f".{target.name}.", dir=target.parent)
    try:
        with os.fdopen(fd, "wb") as tmp:
            tmp.write(payload)
        os.replace(tmp_name, target)
    except BaseException:
        Path(tmp_name).unlink(missing_ok=True)
        raise
    return target.resolve()


def package_version() -> str:
    try:
        return version("ddmaxwell")
    except PackageNotFoundError:
        # package is not installed
        return "unknown"
