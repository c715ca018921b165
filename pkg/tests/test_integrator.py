import logging
import math

import numpy as np
import pytest

from ddmaxwell import DDMaxwell
from ddmaxwell.dynamics import State, gauss_residuals
from ddmaxwell.exceptions import DDMaxwellBlowUpError, DDMaxwellConfigError, DDMaxwellUserError
from ddmaxwell.formats.config import parse_config
from ddmaxwell.helpers import phi_functions
from ddmaxwell.integrator import (
    IntegratorConfig,
    cfl_limit,
    friedrichs_sequence,
    linear_propagator,
    simulate,
    state_distance,
    step,
)
from ddmaxwell.models.trajectory import LEDGER_COLUMNS
from ddmaxwell.spectral import (
    Grid,
    ScalarField,
    VectorField3,
    divergence_free_field,
    solve_gauss_electric,
    sobolev_norm,
)
from ddmaxwell.verification import state_corpus


@pytest.fixture(name="small_grid")
def fixture_small_grid() -> Grid:
    return Grid(16, 2 * math.pi)


def _vacuum(grid: Grid, seed: int = 3) -> State:
    rng = np.random.default_rng(seed)
    electric = divergence_free_field(grid, rng, amplitude=0.3)
    magnetic = divergence_free_field(grid, rng, amplitude=0.3)
    return State(ScalarField.zeros(grid), electric, magnetic)


class TestIntegratorConfig:
    def test_steps(self):
        assert IntegratorConfig(dt=0.01, t_end=0.05).steps == 5
        assert IntegratorConfig(dt=0.02, t_end=0.05).steps == 3
        assert IntegratorConfig(dt=0.01, t_end=0.05).cutoff is None
        assert IntegratorConfig(dt=0.01, t_end=0.05, cutoff_radius=4).cutoff.radius == 4

    @pytest.mark.parametrize(
        ("changes", "key"),
        [
            ({"dt": 0.0}, "time.dt"),
            ({"t_end": -1.0}, "time.t_end"),
            ({"cfl_safety": 1.5}, "time.cfl_safety"),
            ({"record_every": 0}, "record_every"),
        ],
    )
    def test_validation(self, changes, key):
        settings = {"dt": 0.01, "t_end": 1.0, **changes}
        with pytest.raises(DDMaxwellConfigError) as error:
            IntegratorConfig(**settings)
        assert error.value.key == key


class TestLinearPropagator:
    def test_heat_semigroup(self, grid):
        x1, x2 = grid.coordinates
        rho = ScalarField(grid, np.sin(x1) * np.cos(2 * x2))
        zeros = VectorField3.zeros(grid)
        evolved = linear_propagator(State(rho, zeros, zeros), 0.3, coupled=False)
        np.testing.assert_allclose(evolved.rho.values, math.exp(-1.5) * rho.values, atol=1e-13)
        assert evolved.time == pytest.approx(0.3)

    def test_vacuum_maxwell_is_an_isometry(self, grid):
        state = _vacuum(grid)
        before = sobolev_norm(state.E, 0) ** 2 + sobolev_norm(state.B, 0) ** 2
        evolved = linear_propagator(state, 0.7, coupled=False)
        after = sobolev_norm(evolved.E, 0) ** 2 + sobolev_norm(evolved.B, 0) ** 2
        assert after == pytest.approx(before, rel=1e-13)

    def test_single_plane_wave(self, grid):
        # E = (0, cos x, 0), B = (0, 0, cos x) travels to the right with unit speed
        x1, _ = grid.coordinates
        zero = np.zeros_like(x1)
        electric = VectorField3.from_arrays(grid, zero, np.cos(x1), zero)
        magnetic = VectorField3.from_arrays(grid, zero, zero, np.cos(x1))
        state = State(ScalarField.zeros(grid), electric, magnetic)
        evolved = linear_propagator(state, 0.4, coupled=False)
        np.testing.assert_allclose(evolved.E.c2.values, np.cos(x1 - 0.4), atol=1e-13)
        np.testing.assert_allclose(evolved.B.c3.values, np.cos(x1 - 0.4), atol=1e-13)

    def test_coupled_feed_preserves_gauss_law(self, grid):
        state = state_corpus(grid, seed=4, size=1)[0]
        evolved = linear_propagator(state, 0.25)
        assert gauss_residuals(evolved)["e_residual"] < 1e-12

    def test_negative_step(self, grid):
        with pytest.raises(DDMaxwellUserError):
            linear_propagator(State.zeros(grid), -0.1)

    def test_phi_functions_match_series(self):
        z = np.array([1e-3, 0.49, 0.51, -2.0 + 1j, 3j])
        ez, phi1, phi2 = phi_functions(z)
        np.testing.assert_allclose(ez, np.exp(z))
        np.testing.assert_allclose(phi1, (np.exp(z) - 1) / z, rtol=1e-9)
        np.testing.assert_allclose(phi2, (np.exp(z) - 1 - z) / z**2, rtol=1e-6)
        assert phi_functions(np.array([0.0]))[1][0] == pytest.approx(1.0)


class TestSimulate:
    def test_recording(self, small_grid):
        state = state_corpus(small_grid, seed=5, size=1, amplitude=0.1)[0]
        traj = simulate(state, IntegratorConfig(dt=0.01, t_end=0.05, record_every=2), keep_states=True)
        np.testing.assert_allclose(traj.times, [0.0, 0.02, 0.04, 0.05])
        assert len(traj.ledger) == 6
        assert len(traj.states) == 4
        assert traj.final_time == pytest.approx(0.05)
        assert traj.rows[-1]["dissipation_integral"] > 0

    def test_step_keeps_constraints(self, small_grid):
        state = state_corpus(small_grid, seed=6, size=1, amplitude=0.2)[0]
        evolved = step(state, IntegratorConfig(dt=0.01, t_end=0.01, cutoff_radius=5))
        residuals = gauss_residuals(evolved)
        assert residuals["e_residual"] < 1e-10
        assert residuals["b_residual"] < 1e-10
        assert evolved.rho.mean == pytest.approx(0.0, abs=1e-14)

    def test_heat_flow_matches_exact_decay(self, small_grid):
        x1, _ = small_grid.coordinates
        rho = ScalarField(small_grid, np.cos(2 * x1))
        zeros = VectorField3.zeros(small_grid)
        traj = simulate(State(rho, zeros, zeros), IntegratorConfig(dt=0.01, t_end=0.1, coupled=False))
        l2 = traj.column("l2_rho")
        np.testing.assert_allclose(l2, l2[0] * np.exp(-4 * traj.times), rtol=1e-12)

    def test_snapshot_sink(self, small_grid):
        written = []

        def sink(state):
            written.append(state.time)
            return f"snapshot-{len(written)}"

        state = _vacuum(small_grid)
        traj = simulate(
            state, IntegratorConfig(dt=0.01, t_end=0.05, coupled=False), snapshot_sink=sink, snapshot_every=2
        )
        np.testing.assert_allclose(written, [0.0, 0.02, 0.04, 0.05])
        assert len(traj.snapshots) == 4

    def test_cfl_halving(self, small_grid, caplog):
        assert cfl_limit(small_grid, 0.0, 0.0, 0.9) == pytest.approx(0.9 * small_grid.spacing)
        state = _vacuum(small_grid)
        with caplog.at_level(logging.WARNING):
            traj = simulate(state, IntegratorConfig(dt=0.5, t_end=0.5, coupled=False))
        assert "CFL violated" in caplog.text
        assert traj.final_time == pytest.approx(0.5)

    def test_blow_up(self, small_grid):
        x1, _ = small_grid.coordinates
        rho = ScalarField(small_grid, 1e7 * np.sin(x1))
        state = State(rho, solve_gauss_electric(rho), VectorField3.zeros(small_grid))
        with pytest.raises(DDMaxwellBlowUpError) as error:
            simulate(state, IntegratorConfig(dt=1.0, t_end=1.0))
        assert error.value.time == 0.0
        assert error.value.linf_rho == pytest.approx(1e7)
        assert len(error.value.trajectory) == 1

    def test_cutoff_above_nyquist(self, small_grid):
        with pytest.raises(DDMaxwellConfigError):
            simulate(_vacuum(small_grid), IntegratorConfig(dt=0.01, t_end=0.01, cutoff_radius=9))

    def test_deterministic(self, small_grid):
        state = state_corpus(small_grid, seed=2, size=1, amplitude=0.5)[0]
        cfg = IntegratorConfig(dt=0.01, t_end=0.1, cutoff_radius=5, record_every=3)
        first = simulate(state, cfg, keep_states=True)
        second = simulate(state, cfg, keep_states=True)
        for row, again in zip(first.rows, second.rows, strict=True):
            assert row.keys() == again.keys()
            np.testing.assert_array_equal(list(row.values()), list(again.values()))
        for name in LEDGER_COLUMNS:
            np.testing.assert_array_equal(first.ledger.column(name), second.ledger.column(name))
        for a, b in zip(first.states, second.states):
            np.testing.assert_array_equal(a.spectrum, b.spectrum)

    @pytest.mark.parametrize("coupled", [True, False])
    def test_vacuum_step_is_linear_propagation(self, small_grid, coupled):
        # without charge the quadratic remainder vanishes identically
        state = _vacuum(small_grid)
        stepped = step(state, IntegratorConfig(dt=0.05, t_end=0.05, coupled=coupled))
        propagated = linear_propagator(state, 0.05, coupled=coupled)
        np.testing.assert_array_equal(stepped.spectrum, propagated.spectrum)
        assert stepped.time == propagated.time

    def test_second_order_convergence(self, small_grid):
        state = state_corpus(small_grid, seed=5, size=1, amplitude=1.0)[0]

        def final(dt: float) -> State:
            cfg = IntegratorConfig(dt=dt, t_end=0.5, record_every=10_000)
            return simulate(state, cfg, keep_states=True).states[-1]

        reference = final(0.00125)
        errors = [state_distance(final(dt), reference) for dt in (0.02, 0.01, 0.005)]
        for coarse, fine in zip(errors, errors[1:]):
            assert 3.0 < coarse / fine < 5.0


class TestFriedrichsSequence:
    def test_sequence(self, grid):
        state = state_corpus(grid, seed=8, size=1, amplitude=0.1)[0]
        cfg = IntegratorConfig(dt=0.005, t_end=0.02, record_every=2)
        sequence = friedrichs_sequence(state, cfg, [3.0, 6.0, 10.0], max_workers=2)
        assert sequence.radii == [3.0, 6.0, 10.0]
        assert [t.cutoff_radius for t in sequence.trajectories] == [3.0, 6.0, 10.0]
        assert len(sequence.distances) == 2
        assert all(d > 0 for d in sequence.distances)

    def test_band_limited_data_is_cutoff_independent(self, grid):
        rng = np.random.default_rng(11)
        electric = divergence_free_field(grid, rng, radius=3, amplitude=0.3)
        magnetic = divergence_free_field(grid, rng, radius=3, amplitude=0.3)
        state = State(ScalarField.zeros(grid), electric, magnetic)
        cfg = IntegratorConfig(dt=0.01, t_end=0.05, record_every=1)
        sequence = friedrichs_sequence(state, cfg, [4.0, 8.0, 10.0])
        assert sequence.distances == pytest.approx([0.0, 0.0], abs=1e-12)

    @pytest.mark.slow
    def test_default_radii(self, tmp_path):
        sequence = DDMaxwell(parse_config(""), output_dir=tmp_path).converge()
        assert sequence.radii == [8.0, 16.0, 32.0]
        first, last = sequence.distances
        assert 0 < last < first
        assert 4 * last <= first
        assert (tmp_path / "convergence.csv").exists()

    @pytest.mark.parametrize("radii", [[], [4.0, 4.0], [8.0, 4.0], [4.0, 11.0]])
    def test_invalid_radii(self, grid, radii):
        with pytest.raises(DDMaxwellConfigError):
            friedrichs_sequence(State.zeros(grid), IntegratorConfig(dt=0.01, t_end=0.01), radii)

    def test_state_distance(self, grid):
        first, second = state_corpus(grid, seed=9, size=2)
        assert state_distance(first, first) == 0.0
        assert state_distance(first, second) == pytest.approx(state_distance(second, first))
        assert state_distance(first, second) > 0
