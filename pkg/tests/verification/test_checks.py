import logging
import math
from functools import lru_cache

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ddmaxwell import DDMaxwell
from ddmaxwell.constants import DEFAULT_DOMAIN_LENGTH, DEFAULT_POINTS_PER_AXIS
from ddmaxwell.dynamics import State
from ddmaxwell.enums import CheckName
from ddmaxwell.exceptions import DDMaxwellUserError
from ddmaxwell.formats.config import parse_config
from ddmaxwell.integrator import IntegratorConfig, simulate
from ddmaxwell.littlewood_paley import q_max
from ddmaxwell.models import CheckReport, GrowthConstants, TrajectoryRecord
from ddmaxwell.spectral import Grid, ScalarField, divergence_free_field
from ddmaxwell.verification import (
    bernstein_ratios,
    check_bernstein,
    check_cutoff_smoothing,
    check_energy_identity,
    check_gauss_transport,
    check_gn,
    check_growth_bound,
    check_h1_balance,
    check_h1_majorants,
    check_lp_log_bound,
    check_maxwell_isometry,
    check_scalar_inequalities,
    contraction_probe,
    field_corpus,
    gaussian_bump,
    gn_ratio,
    ledger_residuals,
    log_report,
    scalar_samples,
    state_corpus,
)
from ddmaxwell.verification.checks import chain_ratios


def _growth_constants(traj: TrajectoryRecord) -> GrowthConstants:
    first = traj.rows[0]
    initial_energy = first["l2_rho"] ** 2 + first["l2_E"] ** 2 + first["l2_B"] ** 2
    return GrowthConstants(c_cal=1.0, initial_energy=initial_energy)


@lru_cache(maxsize=None)
def _reference_run(dt: float, cutoff: float) -> TrajectoryRecord:
    return DDMaxwell(parse_config(f"cutoff.n={cutoff!r}\ntime.dt={dt!r}\n")).reference_trajectory()


class TestTrajectoryChecks:
    def test_energy_identity(self, reference):
        report = check_energy_identity(reference)
        assert report.name == CheckName.ENERGY.value
        assert report.passed, report.note
        assert report.lhs < 1e-5
        assert "bound margin" in report.note

    def test_energy_identity_detects_tampering(self, reference):
        tampered = TrajectoryRecord(rows=reference.rows)
        ledger = reference.ledger
        for i in range(len(ledger)):
            energy = ledger.energy[i] * (1 + 0.1 * i)
            rates = ledger.dissipation_rate[i], ledger.balance_rate[i], ledger.signed_rate[i]
            tampered.ledger.append(ledger.t[i], energy, *rates)
        assert not check_energy_identity(tampered).passed

    def test_growth_bound(self, reference):
        report = check_growth_bound(reference, _growth_constants(reference))
        assert report.passed
        assert report.calibration_constant == 1.0
        assert "Duhamel margin" in report.note

    def test_gauss_transport(self, reference):
        report = check_gauss_transport(reference)
        assert report.passed
        assert report.lhs < 1e-10

    def test_h1_balance(self, reference):
        report = check_h1_balance(reference)
        assert report.passed, report.note
        assert report.tolerance == 1e-6
        assert "Gronwall envelope margin" in report.note

    def test_h1_balance_detects_flipped_term(self, reference):
        flipped = TrajectoryRecord(rows=[{**row, "J1": -row["J1"]} for row in reference.rows])
        report = check_h1_balance(flipped)
        assert not report.passed
        assert report.lhs > 1e-3

    def test_lp_log_bound(self, reference, bank):
        grid = reference.states[0].grid
        report = check_lp_log_bound(reference, bank, _growth_constants(reference), 4.0, 4.0, q_max(grid))
        assert report.passed, report.note
        assert "block-sum excess" in report.note
        assert np.all(chain_ratios(reference, q_max(grid)) < 1.0)

    def test_lp_log_bound_fails_with_tiny_chain_constant(self, reference, bank):
        grid = reference.states[0].grid
        report = check_lp_log_bound(reference, bank, _growth_constants(reference), 4.0, 1e-6, q_max(grid))
        assert not report.passed

    def test_checks_need_rows(self):
        with pytest.raises(DDMaxwellUserError):
            check_gauss_transport(TrajectoryRecord())
        with pytest.raises(DDMaxwellUserError):
            check_energy_identity(TrajectoryRecord())

    def test_maxwell_isometry(self, grid):
        rng = np.random.default_rng(1)
        electric, magnetic = divergence_free_field(grid, rng), divergence_free_field(grid, rng)
        vacuum = State(ScalarField.zeros(grid), electric, magnetic)
        traj = simulate(vacuum, IntegratorConfig(dt=0.01, t_end=0.5, record_every=10, coupled=False))
        report = check_maxwell_isometry(traj)
        assert report.passed
        assert report.tolerance == 1e-12

    def test_maxwell_isometry_needs_vacuum(self, reference):
        with pytest.raises(DDMaxwellUserError, match="rho = 0"):
            check_maxwell_isometry(reference)

    def test_contraction_probe(self, grid):
        state = state_corpus(grid, seed=12, size=1, amplitude=0.1)[0]
        cfg = IntegratorConfig(dt=0.005, t_end=0.05, record_every=2, cutoff_radius=10)
        for perturb_density in (True, False):
            report = contraction_probe(state, cfg, 1e-6, 1.0, perturb_density=perturb_density, seed=1)
            assert report.passed, report.note
            assert report.lhs <= 1.0
            assert "measured rate" in report.note

    def test_contraction_probe_rejects_negative_delta(self, grid):
        with pytest.raises(DDMaxwellUserError):
            contraction_probe(state_corpus(grid, 0, 1)[0], IntegratorConfig(dt=0.01, t_end=0.01), -1.0, 1.0)


class TestEnergyLedger:
    def test_quadratic_rate_on_uneven_steps(self):
        t = np.array([0.0, 0.1, 0.25, 0.4, 0.5])
        residuals = ledger_residuals(t**3 + 2.0, 3 * t**2, t)
        assert residuals.shape == (3,)
        np.testing.assert_allclose(residuals, 0.0, atol=1e-12)

    def test_two_samples(self):
        t = np.array([0.0, 0.5])
        np.testing.assert_allclose(ledger_residuals(t**2 / 2, t, t), [0.0], atol=1e-15)

    def test_shortened_final_step(self):
        t = np.array([0.0, 0.1, 0.2, 0.2005])
        energy, rate = np.sin(t), np.cos(t)
        residuals = ledger_residuals(energy, rate, t)
        single = (energy[3] - energy[2]) / (t[3] - t[2]) - 0.5 * (rate[2] + rate[3])
        assert residuals[-1] == pytest.approx(single)
        assert abs(residuals[0]) < 1e-6

    def test_oscillating_rate(self):
        t = np.linspace(0.0, 1.0, 101)
        residuals = ledger_residuals(-np.cos(5 * t) / 5, np.sin(5 * t), t)
        assert np.max(np.abs(residuals)) < 1e-6


class TestCorpusChecks:
    def test_gn_ratio_of_single_mode(self, grid):
        x1, _ = grid.coordinates
        for k in (1, 3):
            u = ScalarField(grid, np.sin(k * x1))
            expected = math.sqrt(3 / 8) * 2 / (k * grid.domain_length)
            assert gn_ratio(u) == pytest.approx(expected)

    def test_gn_ratio_of_gaussian(self, config):
        section = config["gaussian"]
        grid = Grid(section.getint("grid_n"), section.getfloat("domain_length_over_pi") * math.pi)
        u = gaussian_bump(grid, section.getfloat("width"))
        assert gn_ratio(u) == pytest.approx(1 / math.sqrt(2 * math.pi), rel=1e-6)

    def test_gn(self, grid):
        corpus = field_corpus(grid, seed=3, size=10)
        report = check_gn(corpus, 0.75)
        assert report.passed
        assert report.note.startswith("10 fields, 0 excluded")
        assert not check_gn(corpus, 1e-3).passed

    def test_gn_excludes_constant_and_biased_fields(self, grid):
        x1, _ = grid.coordinates
        fields = [
            ScalarField(grid, np.ones((32, 32))),
            ScalarField(grid, 1 + np.sin(x1)),
            ScalarField(grid, np.sin(x1)),
        ]
        report = check_gn(fields, 0.75)
        assert report.note.startswith("1 fields, 2 excluded")

    def test_scalar_inequalities(self):
        report = check_scalar_inequalities(scalar_samples(seed=0, size=2000))
        assert report.passed
        assert "2000 pairs, 0 violations, 0 rejected" == report.note

    def test_scalar_inequalities_reject_out_of_range_pairs(self):
        report = check_scalar_inequalities([[0.5, 1.0], [2.0, -1.0], [1.0, 0.0]])
        assert report.note == "1 pairs, 0 violations, 2 rejected"
        assert report.passed

    @settings(max_examples=200, deadline=None)
    @given(a=st.floats(min_value=1.0, max_value=1e6), b=st.floats(min_value=0.0, max_value=1e6))
    def test_scalar_inequalities_property(self, a, b):
        assert check_scalar_inequalities([[a, b]]).passed

    def test_bernstein(self, grid, bank):
        corpus = field_corpus(grid, seed=4, size=10)
        report = check_bernstein(corpus, bank, 1.0, 2.0)
        assert report.passed
        assert report.lhs <= 1.0
        assert not check_bernstein(corpus, bank, 1.0, 0.1).passed

    def test_cutoff_smoothing(self, grid):
        report = check_cutoff_smoothing(field_corpus(grid, seed=5, size=5), [2.0, 5.0, 10.0])
        assert report.passed
        assert report.lhs <= 1.0

    def test_h1_majorants(self, grid):
        report = check_h1_majorants(state_corpus(grid, seed=6, size=4), 1.0)
        assert report.passed
        assert report.note.startswith("tightest term J")

    def test_h1_majorants_of_resting_state(self, grid):
        report = check_h1_majorants([State.zeros(grid)], 1.0)
        assert report.passed
        assert report.lhs == 0.0

    def test_worst_ratios_are_seed_stable(self, bank):
        grid = Grid(DEFAULT_POINTS_PER_AXIS, DEFAULT_DOMAIN_LENGTH)
        corpora = [field_corpus(grid, seed=seed, size=100) for seed in (7, 8)]
        gn = [max(gn_ratio(u) for u in corpus) for corpus in corpora]
        bernstein = [bernstein_ratios(corpus, bank) for corpus in corpora]
        assert gn[1] == pytest.approx(gn[0], rel=0.1)
        assert bernstein[1][0] == pytest.approx(bernstein[0][0], rel=0.1)
        assert bernstein[1][1] == pytest.approx(bernstein[0][1], rel=0.1)


@pytest.mark.slow
class TestReferenceRun:
    def test_energy_residual(self):
        report = check_energy_identity(_reference_run(2e-3, 40.0))
        assert report.passed, report.note
        assert report.lhs <= 1e-5

    def test_energy_residual_falls_with_dt(self):
        coarse = check_energy_identity(_reference_run(2e-3, 40.0)).lhs
        fine = check_energy_identity(_reference_run(1e-3, 40.0)).lhs
        assert coarse >= 3.5 * fine

    @pytest.mark.parametrize("cutoff", [21.0, 32.0, 40.0])
    def test_cutoff_energy_identity(self, cutoff):
        report = check_energy_identity(_reference_run(2e-3, cutoff))
        assert report.passed, report.note


class TestLogReport:
    def test_levels(self, caplog):
        with caplog.at_level(logging.INFO):
            log_report(CheckReport.from_bound("gn", 0.5, 0.75))
            log_report(CheckReport.from_bound("gn", 0.9, 0.75))
        levels = [record.levelname for record in caplog.records]
        assert levels == ["INFO", "ERROR"]
        assert "PASS gn" in caplog.records[0].getMessage()
        assert "FAIL gn" in caplog.records[1].getMessage()
