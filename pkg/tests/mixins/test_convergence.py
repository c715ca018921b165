import pytest

from ddmaxwell.exceptions import DDMaxwellConfigError


class TestConvergence:
    def test_converge(self, runner, tmp_path):
        sequence = runner.converge()
        assert sequence.radii == [4.0, 8.0]
        assert len(sequence.distances) == 1
        assert sequence.distances[0] > 0
        lines = (tmp_path / "convergence.csv").read_text(encoding="utf-8").splitlines()
        assert lines[0] == "radius,next_radius,distance"
        assert lines[1].startswith("4,8,")

    def test_converge_radii_argument(self, runner):
        sequence = runner.converge([2.0, 4.0, 8.0])
        assert len(sequence.distances) == 2

    def test_converge_invalid_radii(self, runner):
        with pytest.raises(DDMaxwellConfigError):
            runner.converge([8.0, 4.0])
