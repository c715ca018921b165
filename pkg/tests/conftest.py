import configparser
import math
from pathlib import Path

import numpy as np
import pytest

from ddmaxwell import DDMaxwell
from ddmaxwell.dynamics import State
from ddmaxwell.formats.config import RunConfig
from ddmaxwell.integrator import IntegratorConfig, simulate
from ddmaxwell.littlewood_paley import DyadicFilterBank, build_filter_bank
from ddmaxwell.models import TrajectoryRecord
from ddmaxwell.presets import build_initial_state
from ddmaxwell.spectral import Grid


def get_resource(file: str) -> str:
    data_dir = Path(__file__).parent
    return data_dir.joinpath(file).as_posix()


def get_config() -> configparser.RawConfigParser:
    config = configparser.RawConfigParser()
    config.read(get_resource("test.cfg"), "utf-8")
    return config


def reference_run_config(config: configparser.RawConfigParser, **changes: object) -> RunConfig:
    """the small dipole run every trajectory test shares"""
    section = config["reference"]
    settings = {
        "grid_n": section.getint("grid_n"),
        "domain_length": section.getfloat("domain_length_over_pi") * math.pi,
        "cutoff_n": section.getfloat("cutoff_n"),
        "time_dt": section.getfloat("dt"),
        "time_t_end": section.getfloat("t_end"),
        "record_every": section.getint("record_every"),
        "init_amplitude": section.getfloat("amplitude"),
        "init_seed": section.getint("seed"),
        "converge_radii": tuple(float(r) for r in section["converge_radii"].split(",")),
    }
    settings.update(changes)
    return RunConfig(**settings)  # type: ignore[arg-type]


@pytest.fixture(name="config")
def fixture_config() -> configparser.RawConfigParser:
    return get_config()


@pytest.fixture(name="grid")
def fixture_grid() -> Grid:
    """32 points on the 2 pi torus, so mode numbers and wavenumbers coincide"""
    return Grid(32, 2 * math.pi)


@pytest.fixture(name="rng")
def fixture_rng() -> np.random.Generator:
    return np.random.default_rng(1234)


@pytest.fixture(name="bank")
def fixture_bank() -> DyadicFilterBank:
    return build_filter_bank()


@pytest.fixture(name="run_config")
def fixture_run_config(config) -> RunConfig:
    return reference_run_config(config)


@pytest.fixture(name="initial")
def fixture_initial(run_config) -> State:
    return build_initial_state(run_config)


@pytest.fixture(name="runner")
def fixture_runner(config, tmp_path) -> DDMaxwell:
    """short reference run writing into a temporary directory"""
    return DDMaxwell(reference_run_config(config, time_t_end=0.01), output_dir=tmp_path)


@pytest.fixture(name="reference", scope="session")
def fixture_reference() -> TrajectoryRecord:
    """dipole run with its states kept, shared by the trajectory checks"""
    cfg = reference_run_config(get_config())
    integrator = IntegratorConfig(
        dt=cfg.time_dt, t_end=cfg.time_t_end, cutoff_radius=cfg.cutoff_n, record_every=cfg.record_every
    )
    return simulate(build_initial_state(cfg), integrator, keep_states=True)
