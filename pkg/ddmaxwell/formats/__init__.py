from .config import CONFIG_KEYS, RunConfig, dump_config, parse_config, read_config
from .snapshot import SnapshotWriter, decode_snapshot, encode_snapshot, read_snapshot, write_snapshot
from .timeseries import write_block_table, write_convergence, write_reports, write_timeseries

__all__ = [
    "CONFIG_KEYS",
    "RunConfig",
    "SnapshotWriter",
    "decode_snapshot",
    "dump_config",
    "encode_snapshot",
    "parse_config",
    "read_config",
    "read_snapshot",
    "write_block_table",
    "write_convergence",
    "write_reports",
    "write_snapshot",
    "write_timeseries",
]
