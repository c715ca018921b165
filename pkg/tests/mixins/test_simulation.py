import csv

import pytest

from ddmaxwell import DDMaxwell
from ddmaxwell.exceptions import DDMaxwellBlowUpError
from ddmaxwell.formats import read_snapshot
from tests.conftest import reference_run_config


class TestSimulation:
    def test_run_simulation(self, runner, tmp_path):
        traj = runner.run_simulation()
        assert traj.final_time == pytest.approx(0.01)
        with open(tmp_path / "timeseries.csv", encoding="utf-8") as file:
            rows = list(csv.DictReader(file))
        assert len(rows) == len(traj) == 3
        assert traj.states is None

    def test_keep_states_without_writing(self, runner, tmp_path):
        traj = runner.run_simulation(keep_states=True, write=False)
        assert len(traj.states) == len(traj)
        assert not (tmp_path / "timeseries.csv").exists()

    def test_snapshots(self, config, tmp_path):
        changes = {"output_snapshot_dir": "snaps", "output_snapshot_every": 5}
        cfg = reference_run_config(config, time_t_end=0.01, **changes)
        traj = DDMaxwell(cfg, output_dir=tmp_path).run_simulation()
        written = sorted((tmp_path / "snaps").iterdir())
        assert len(written) == len(traj.snapshots) >= 2
        assert read_snapshot(written[-1]).time == pytest.approx(0.01)

    def test_blow_up_keeps_partial_timeseries(self, config, tmp_path):
        cfg = reference_run_config(config, init_amplitude=1e7, time_dt=1.0, time_t_end=1.0, cutoff_n=None)
        with pytest.raises(DDMaxwellBlowUpError):
            DDMaxwell(cfg, output_dir=tmp_path).run_simulation()
        lines = (tmp_path / "timeseries.csv").read_text(encoding="utf-8").splitlines()
        assert len(lines) == 2

    def test_config_file(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text("grid.n=16\ndomain.length=6.25\nconverge.radii=2,4\n", encoding="utf-8")
        runner = DDMaxwell(path, output_dir=tmp_path)
        assert runner.grid.n == 16
        assert runner.initial_state().grid.domain_length == 6.25
        assert runner.initial_state() is runner.initial_state()
