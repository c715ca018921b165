from ddmaxwell.verification import load_calibration


class TestCalibration:
    def test_recalibrate(self, runner, tmp_path):
        previous = runner.calibration
        updated = runner.recalibrate(reference=runner.reference_trajectory())
        assert updated is runner.calibration
        assert updated.source == tmp_path / "calibration.csv"
        assert load_calibration(updated.source).values == updated.values
        assert updated["C_CAL"] == previous["C_CAL"]
        assert "seed 7" in updated.notes["C_GN"]
        assert runner.verify(["gn", "bernstein"])[0].passed
