"""
DDMX field snapshots.

Layout (little-endian, no padding): magic ``DDMX``, format version (u32), ``N`` (u32), ``L`` (f64),
time (f64), then the planes ``rho, E1, E2, E3, B1, B2, B3``, each ``N x N`` f64 in row-major order.
"""

from pathlib import Path

import numpy as np

from ddmaxwell.constants import SNAPSHOT_MAGIC, SNAPSHOT_PLANES, SNAPSHOT_VERSION
from ddmaxwell.dynamics import State
from ddmaxwell.exceptions import DDMaxwellIOError, DDMaxwellUserError
from ddmaxwell.helpers import atomic_write
from ddmaxwell.spectral import Grid

HEADER = np.dtype(
    [("magic", "S4"), ("version", "<u4"), ("n", "<u4"), ("length", "<f8"), ("time", "<f8")]
)
PLANE_DTYPE = np.dtype("<f8")


def encode_snapshot(s: State) -> bytes:
    header = np.zeros(1, dtype=HEADER)
    header[0] = (SNAPSHOT_MAGIC, SNAPSHOT_VERSION, s.grid.n, s.grid.domain_length, s.time)
    planes = np.ascontiguousarray(s.planes, dtype=PLANE_DTYPE)
    return header.tobytes() + planes.tobytes()


def decode_snapshot(data: bytes, constrained: bool = True) -> State:
    """
    :param constrained: passed on to :py:class:`~ddmaxwell.dynamics.State`
    :raises DDMaxwellUserError: on a wrong magic, an unsupported version or a truncated payload
    """
    if len(data) < HEADER.itemsize:
        raise DDMaxwellUserError(f"Snapshot too short for its header: {len(data)} bytes.")
    header = np.frombuffer(data, dtype=HEADER, count=1)[0]
    if bytes(header["magic"]) != SNAPSHOT_MAGIC:
        raise DDMaxwellUserError(f"Not a DDMX snapshot (magic {bytes(header['magic'])!r}).")
    if int(header["version"]) != SNAPSHOT_VERSION:
        raise DDMaxwellUserError(
            f"Unsupported snapshot version {int(header['version'])}, expected {SNAPSHOT_VERSION}."
        )
    n = int(header["n"])
    count = len(SNAPSHOT_PLANES) * n * n
    expected = HEADER.itemsize + count * PLANE_DTYPE.itemsize
    if len(data) != expected:
        raise DDMaxwellUserError(f"Snapshot payload has {len(data)} bytes, expected {expected} for N={n}.")
    planes = np.frombuffer(data, dtype=PLANE_DTYPE, count=count, offset=HEADER.itemsize)
    grid = Grid(n, float(header["length"]))
    stacked = planes.reshape(len(SNAPSHOT_PLANES), n, n).astype(np.float64)
    return State.from_planes(grid, stacked, float(header["time"]), constrained)


def write_snapshot(path: str | Path, s: State) -> Path:
    return atomic_write(path, encode_snapshot(s))


def read_snapshot(path: str | Path, constrained: bool = True) -> State:
    """:raises DDMaxwellIOError: if the file cannot be read"""
    try:
        data = Path(path).read_bytes()
    except OSError as error:
        raise DDMaxwellIOError(f"Cannot read snapshot {path}: {error}") from error
    return decode_snapshot(data, constrained)


class SnapshotWriter:
    """
    Snapshot sink for :py:func:`~ddmaxwell.integrator.simulate`: writes ``snapshot_000000.ddmx``,
    ``snapshot_000001.ddmx``, ... into ``directory``.
    """

    def __init__(self, directory: str | Path, prefix: str = "snapshot"):
        self.directory = Path(directory)
        self.prefix = prefix
        self.count = 0

    def __call__(self, s: State) -> Path:
        path = write_snapshot(self.directory / f"{self.prefix}_{self.count:06d}.ddmx", s)
        self.count += 1
        return path
