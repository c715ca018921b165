import csv

import pytest

from ddmaxwell.enums import CheckName
from ddmaxwell.exceptions import DDMaxwellVerificationError
from ddmaxwell.verification import Calibration


class TestVerification:
    def test_trajectory_checks(self, runner, tmp_path):
        reports = runner.verify([CheckName.ENERGY, "gauss", "growth"])
        assert [r.name for r in reports] == ["energy", "gauss", "growth"]
        assert all(r.passed for r in reports)
        with open(tmp_path / "reports.csv", encoding="utf-8") as file:
            rows = list(csv.DictReader(file))
        assert [row["passed"] for row in rows] == ["true"] * 3

    def test_corpus_checks(self, runner):
        reports = runner.verify(["scalar", "smoothing"])
        assert all(r.passed for r in reports)

    def test_isometry(self, runner):
        traj = runner.isometry_trajectory()
        assert len(traj) == 11
        assert runner.verify(["isometry"])[0].passed

    def test_given_reference(self, runner):
        reference = runner.reference_trajectory()
        assert len(reference.states) == len(reference)
        assert runner.verify(["gauss"], reference=reference)[0].passed

    def test_failure(self, runner):
        values = {**runner.calibration.values, "C_GN": 1e-3}
        runner.calibration = Calibration(values, runner.calibration.notes)
        with pytest.raises(DDMaxwellVerificationError, match="gn"):
            runner.verify(["gn"])
        reports = runner.verify(["gn"], raise_on_failure=False)
        assert not reports[0].passed
        assert reports[0].calibration_constant == 1e-3

    def test_unknown_check(self, runner):
        with pytest.raises(ValueError):
            runner.verify(["unknown"])
