"""
Plain ``key=value`` run configuration.

One key per line, ``#`` starts a comment, blank lines are ignored. Every key is optional; the
defaults are listed in :py:data:`CONFIG_KEYS` and printed by ``ddmaxwell --help``.
"""

import math
from collections.abc import Callable
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Any

from ddmaxwell.constants import DEFAULT_DOMAIN_LENGTH, DEFAULT_POINTS_PER_AXIS, MIN_POINTS_PER_AXIS
from ddmaxwell.enums import CheckName, Preset
from ddmaxwell.exceptions import DDMaxwellConfigError, DDMaxwellIOError
from ddmaxwell.spectral import CutoffOperator, Grid

ALL_CHECKS = tuple(CheckName)


@dataclass(frozen=True)
class RunConfig:
    """
    Validated run configuration; attribute names follow the config keys with dots replaced.

    :param cutoff_n: Friedrichs radius in mode numbers, ``None`` for the untruncated system
    :param snapshot_dir: directory for DDMX snapshots, ``None`` to write none
    :param calibration_path: calibration file, ``None`` for the packaged constants
    """

    grid_n: int = DEFAULT_POINTS_PER_AXIS
    domain_length: float = DEFAULT_DOMAIN_LENGTH
    cutoff_n: float | None = None
    time_dt: float = 2e-3
    time_t_end: float = 1.0
    time_cfl_safety: float = 0.9
    record_every: int = 10
    init_preset: Preset = Preset.DIPOLE
    init_seed: int = 7
    init_amplitude: float = 0.25
    init_width: float = 1.0
    output_timeseries_path: Path = Path("timeseries.csv")
    output_snapshot_dir: Path | None = None
    output_snapshot_every: int = 100
    verify_suite: tuple[CheckName, ...] = ALL_CHECKS
    verify_calibrate: bool = False
    verify_calibration_path: Path | None = None
    converge_radii: tuple[float, ...] = (8.0, 16.0, 32.0)
    contraction_delta: float = 1e-6
    #: source line of each key that was set explicitly, used in error messages
    lines: dict[str, int] = field(default_factory=dict, compare=False, repr=False)

    @property
    def grid(self) -> Grid:
        return Grid(self.grid_n, self.domain_length)

    @property
    def cutoff(self) -> CutoffOperator | None:
        return None if self.cutoff_n is None else CutoffOperator(self.cutoff_n)


def _key(attribute: str) -> str:
    for prefix in ("grid", "domain", "cutoff", "time", "init", "output", "verify", "converge", "contraction"):
        if attribute.startswith(prefix + "_"):
            return f"{prefix}.{attribute[len(prefix) + 1 :]}"
    return attribute


#: config key -> attribute of :py:class:`RunConfig`, in documentation order
CONFIG_KEYS = {_key(f.name): f.name for f in fields(RunConfig) if f.name != "lines"}


def _float(raw: str) -> float:
    value = float(raw)
    if not math.isfinite(value):
        raise ValueError(f"not finite: {raw}")
    return value


def _bool(raw: str) -> bool:
    lowered = raw.lower()
    if lowered in ("true", "yes", "1", "on"):
        return True
    if lowered in ("false", "no", "0", "off"):
        return False
    raise ValueError(f"not a boolean: {raw}")


def _optional(parse: Callable[[str], Any]) -> Callable[[str], Any]:
    return lambda raw: None if raw == "" else parse(raw)


def _suite(raw: str) -> tuple[CheckName, ...]:
    names = [name.strip() for name in raw.split(",") if name.strip()]
    return tuple(CheckName(name) for name in names) if names else ALL_CHECKS


def _radii(raw: str) -> tuple[float, ...]:
    return tuple(_float(value.strip()) for value in raw.split(",") if value.strip())


PARSERS: dict[str, Callable[[str], Any]] = {
    "grid.n": int,
    "domain.length": _float,
    "cutoff.n": _optional(_float),
    "time.dt": _float,
    "time.t_end": _float,
    "time.cfl_safety": _float,
    "record_every": int,
    "init.preset": Preset,
    "init.seed": int,
    "init.amplitude": _float,
    "init.width": _float,
    "output.timeseries_path": Path,
    "output.snapshot_dir": _optional(Path),
    "output.snapshot_every": int,
    "verify.suite": _suite,
    "verify.calibrate": _bool,
    "verify.calibration_path": _optional(Path),
    "converge.radii": _radii,
    "contraction.delta": _float,
}


def _dump_value(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, Preset | CheckName):
        return value.value
    if isinstance(value, tuple):
        return ",".join(_dump_value(item) for item in value)
    if isinstance(value, Path):
        return value.as_posix()
    return str(value)


def parse_config(text: str) -> RunConfig:
    """
    Parse and validate a run configuration.

    :param text: ``key=value`` lines, ``#`` comments
    :return: the validated configuration, defaults for every key not given
    :raises DDMaxwellConfigError: on an unknown or repeated key, a value of the wrong type or a
        violated constraint; the error carries the key and the 1-based line number
    """
    values: dict[str, Any] = {}
    lines: dict[str, int] = {}
    for number, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise DDMaxwellConfigError("expected key=value", line=number)
        key, raw = (part.strip() for part in line.split("=", 1))
        if key not in PARSERS:
            raise DDMaxwellConfigError("unknown key", key=key, line=number)
        if key in lines:
            raise DDMaxwellConfigError(f"repeated key, first set on line {lines[key]}", key=key, line=number)
        try:
            values[CONFIG_KEYS[key]] = PARSERS[key](raw)
        except ValueError as error:
            raise DDMaxwellConfigError(f"invalid value {raw!r}: {error}", key=key, line=number) from error
        lines[key] = number
    cfg = RunConfig(**values, lines=lines)
    validate_config(cfg)
    return cfg


def _require(cfg: RunConfig, key: str, condition: bool, message: str) -> None:
    if not condition:
        raise DDMaxwellConfigError(message, key=key, line=cfg.lines.get(key))


def validate_config(cfg: RunConfig) -> None:
    """
    :raises DDMaxwellConfigError: on the first violated constraint
    """
    _require(
        cfg,
        "grid.n",
        cfg.grid_n >= MIN_POINTS_PER_AXIS and cfg.grid_n % 2 == 0,
        f"must be an even integer >= {MIN_POINTS_PER_AXIS}, got {cfg.grid_n}",
    )
    _require(cfg, "domain.length", cfg.domain_length > 0, f"must be positive, got {cfg.domain_length}")
    _require(cfg, "time.dt", cfg.time_dt > 0, f"must be positive, got {cfg.time_dt}")
    _require(cfg, "time.t_end", cfg.time_t_end > 0, f"must be positive, got {cfg.time_t_end}")
    _require(
        cfg, "time.cfl_safety", 0 < cfg.time_cfl_safety <= 1, f"must lie in (0, 1], got {cfg.time_cfl_safety}"
    )
    _require(cfg, "record_every", cfg.record_every > 0, f"must be positive, got {cfg.record_every}")
    _require(cfg, "init.seed", cfg.init_seed >= 0, f"must be non-negative, got {cfg.init_seed}")
    amplitude = cfg.init_amplitude
    _require(cfg, "init.amplitude", amplitude >= 0, f"must be non-negative, got {amplitude}")
    _require(cfg, "init.width", cfg.init_width > 0, f"must be positive, got {cfg.init_width}")
    every, delta = cfg.output_snapshot_every, cfg.contraction_delta
    _require(cfg, "output.snapshot_every", every > 0, f"must be positive, got {every}")
    _require(cfg, "contraction.delta", delta >= 0, f"must be non-negative, got {delta}")
    _require(cfg, "converge.radii", len(cfg.converge_radii) > 0, "needs at least one radius")

    grid = cfg.grid
    if cfg.cutoff_n is not None:
        _require(cfg, "cutoff.n", cfg.cutoff_n > 0, f"must be positive, got {cfg.cutoff_n}")
        _require(
            cfg,
            "cutoff.n",
            cfg.cutoff_n <= grid.dealias_radius,
            f"cutoff radius {cfg.cutoff_n} exceeds the de-aliasing limit N/3 = {grid.dealias_radius}",
        )
    for radius in cfg.converge_radii:
        _require(
            cfg,
            "converge.radii",
            0 < radius <= grid.dealias_radius,
            f"radius {radius} outside (0, N/3 = {grid.dealias_radius}]",
        )


def dump_config(cfg: RunConfig) -> str:
    """every key in :py:data:`CONFIG_KEYS` order; ``parse_config(dump_config(cfg)) == cfg``"""
    return "".join(
        f"{key}={_dump_value(getattr(cfg, attribute))}\n" for key, attribute in CONFIG_KEYS.items()
    )


def read_config(path: str | Path | None) -> RunConfig:
    """
    Parse the file at ``path``, or the defaults if ``path`` is ``None``

    :raises DDMaxwellIOError: if the file cannot be read
    """
    if path is None:
        return parse_config("")
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as error:
        raise DDMaxwellIOError(f"Cannot read configuration {path}: {error}") from error
    return parse_config(text)


def override(cfg: RunConfig, **changes: Any) -> RunConfig:
    """``cfg`` with the given attributes replaced and re-validated"""
    updated = replace(cfg, **changes)
    validate_config(updated)
    return updated


def describe_keys() -> str:
    """``key (default)`` lines for the command-line help"""
    defaults = RunConfig()
    return "\n".join(
        f"  {key} (default: {_dump_value(getattr(defaults, attribute)) or 'unset'})"
        for key, attribute in CONFIG_KEYS.items()
    )
