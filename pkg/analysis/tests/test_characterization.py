"""
Unit tests for Wigner grids, squeezing, fidelities and preparation times.
"""
import math

import numpy as np
import pytest
from django.test import SimpleTestCase
from scipy.linalg import expm

from analysis.services import (
    CutoffService,
    FidelityService,
    PreparationTimeService,
    ReferenceStateService,
    SqueezingService,
    WignerService,
)
from dipolarvqe.exceptions import DimensionMismatchError, InvalidParameterError, UndefinedSqueezingError
from engine.dto import CircuitParams, QuantumState
from engine.services import EntanglerService, GateService
from ensemble.operators import SpinOperators
from ensemble.services import ConfigurationService, CouplingService, HamiltonianService

RESOLUTION = (32, 64)


class TestWignerService(SimpleTestCase):
    """Tests for the spherical Wigner function."""

    def test_css_lobe_points_along_x(self):
        grid = WignerService.wigner_distribution(ReferenceStateService.reference_state('css', 4), RESOLUTION)
        i, j = np.unravel_index(np.argmax(grid.values), grid.values.shape)
        assert abs(grid.theta[i] - math.pi / 2) <= math.pi / RESOLUTION[0]
        assert grid.phi[j] == 0.0

    def test_normalization(self):
        grid = WignerService.wigner_distribution(ReferenceStateService.reference_state('css', 5))
        assert grid.symmetric_weight == pytest.approx(1.0)
        assert abs(grid.integral() - 1.0) < 1e-6

    def test_non_symmetric_weight(self):
        singlet = np.array([0.0, 1.0, -1.0, 0.0]) / math.sqrt(2)
        state = QuantumState.pure(np.kron(singlet, np.array([1.0, 0.0])))
        grid = WignerService.wigner_distribution(state, RESOLUTION)
        assert grid.symmetric_weight == pytest.approx(0.0, abs=1e-12)
        assert abs(grid.integral()) < 1e-6

    def test_mixed_state_weight(self):
        state = QuantumState.density(np.eye(4) / 4)
        grid = WignerService.wigner_distribution(state, RESOLUTION)
        assert grid.symmetric_weight == pytest.approx(0.75)
        assert abs(grid.integral() - 0.75) < 1e-6

    def test_ghz_has_two_lobes_and_fringes(self):
        grid = WignerService.wigner_distribution(ReferenceStateService.reference_state('ghz-x', 3), RESOLUTION)
        equator = RESOLUTION[0] // 2
        assert grid.values[equator, 0] > 0
        assert grid.values[equator, RESOLUTION[1] // 2] > 0
        assert grid.values.min() < -1e-3

    def test_rotation_about_z_shifts_azimuth(self):
        rng = np.random.default_rng(9)
        vector = rng.normal(size=8) + 1j * rng.normal(size=8)
        state = QuantumState.pure(vector / np.linalg.norm(vector))
        step = 2 * math.pi / RESOLUTION[1]
        rotated = GateService.global_rotation(state, 'z', 3 * step)
        before = WignerService.wigner_distribution(state, RESOLUTION)
        after = WignerService.wigner_distribution(rotated, RESOLUTION)
        assert np.allclose(after.values, np.roll(before.values, 3, axis=1), atol=1e-9)

    def test_rows_cover_grid(self):
        grid = WignerService.wigner_distribution(ReferenceStateService.reference_state('css', 2), RESOLUTION)
        rows = grid.rows()
        assert len(rows) == RESOLUTION[0] * RESOLUTION[1]
        assert set(rows[0]) == {'theta', 'phi', 'w'}

    def test_rejects_empty_grid(self):
        with pytest.raises(InvalidParameterError):
            WignerService.wigner_distribution(ReferenceStateService.reference_state('css', 2), (0, 8))


class TestSqueezingService(SimpleTestCase):
    """Tests for the Wineland squeezing parameter."""

    def test_css_is_at_projection_noise(self):
        report = SqueezingService.squeezing_parameter(ReferenceStateService.reference_state('css', 6))
        assert report.xi_squared == pytest.approx(1.0)
        assert report.mean_jx == pytest.approx(3.0)
        assert report.cfi_bound == pytest.approx(6.0)

    def test_twisted_state_is_squeezed(self):
        n = 4
        css = ReferenceStateService.reference_state('css', n)
        jz = SpinOperators.collective('z', n)
        twisted = QuantumState.pure(expm(-1j * 0.1 * jz @ jz) @ css.data)
        best = min(
            SqueezingService.squeezing_parameter(GateService.global_rotation(twisted, 'x', angle)).xi_squared
            for angle in np.linspace(0.0, math.pi, 181)
        )
        assert best < 1.0

    def test_cat_state_is_undefined(self):
        with pytest.raises(UndefinedSqueezingError):
            SqueezingService.squeezing_parameter(ReferenceStateService.reference_state('ghz-z', 3))


class TestFidelityService(SimpleTestCase):
    """Tests for state overlaps."""

    def test_identical_states(self):
        state = ReferenceStateService.reference_state('dicke', 3, excitations=1)
        assert FidelityService.state_fidelity(state, state) == pytest.approx(1.0)

    def test_orthogonal_states(self):
        up = QuantumState.pure(np.array([1.0, 0.0]))
        down = QuantumState.pure(np.array([0.0, 1.0]))
        assert FidelityService.state_fidelity(up, down) == pytest.approx(0.0, abs=1e-15)

    def test_css_against_cat(self):
        css = ReferenceStateService.reference_state('css', 2)
        cat = ReferenceStateService.reference_state('ghz-x', 2)
        assert FidelityService.state_fidelity(css, cat) == pytest.approx(0.5)

    def test_mixed_states(self):
        css = ReferenceStateService.reference_state('css', 2)
        cat = ReferenceStateService.reference_state('ghz-x', 2)
        mixed = QuantumState.density(0.5 * css.density_matrix() + 0.5 * np.eye(4) / 4)
        assert FidelityService.state_fidelity(mixed, mixed) == pytest.approx(1.0, abs=1e-7)
        assert FidelityService.state_fidelity(css.as_density(), cat.as_density()) == pytest.approx(0.5, abs=1e-7)
        assert FidelityService.state_fidelity(mixed, cat) == pytest.approx(
            FidelityService.state_fidelity(cat, mixed)
        )

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            FidelityService.state_fidelity(
                ReferenceStateService.reference_state('css', 2),
                ReferenceStateService.reference_state('css', 3),
            )


class TestCutoffService(SimpleTestCase):
    """Tests for the interaction-cutoff study."""

    def setUp(self):
        self.config = ConfigurationService.generate_configuration('chain', 4, 10.0)
        coupling = CouplingService.coupling_matrix(self.config)
        self.f_dd = CouplingService.mean_nn_coupling(coupling, self.config)
        self.max_coupling = float(np.max(np.abs(coupling.v)) / (2 * np.pi))
        bound = 1.0 / self.f_dd
        self.theta = (0.4 * bound, 1.1, 0.7 * bound, 0.2 * bound, 2.5, 0.9 * bound)

    def test_zero_cutoff_keeps_state(self):
        assert CutoffService.cutoff_fidelity(self.config, self.theta, 0.0) == pytest.approx(1.0)

    def test_full_cutoff_leaves_rotations_only(self):
        params = CircuitParams.from_vector(self.theta, 1.0 / self.f_dd)
        _, hamiltonian = HamiltonianService.for_configuration(self.config)
        css = GateService.initial_state(4)
        reference = EntanglerService.apply_entangler(params, hamiltonian, css)
        free = HamiltonianService.from_matrix(np.zeros((16, 16), dtype=complex), 4)
        expected = FidelityService.state_fidelity(reference, EntanglerService.apply_entangler(params, free, css))
        value = CutoffService.cutoff_fidelity(self.config, self.theta, 2 * self.max_coupling)
        assert value == pytest.approx(expected)
        assert value < 1.0

    def test_sweep(self):
        sweep = CutoffService.cutoff_sweep(self.config, self.theta, [0.0, 0.1 * self.f_dd, 2 * self.max_coupling])
        assert [f for f, _ in sweep] == [0.0, 0.1 * self.f_dd, 2 * self.max_coupling]
        assert all(0.0 <= value <= 1.0 for _, value in sweep)


class TestPreparationTimeService(SimpleTestCase):
    """Tests for preparation-time accounting."""

    def test_zero_durations(self):
        assert PreparationTimeService.preparation_time((0.0, 1.0, 0.0), 1e4).fdd_t == 0.0

    def test_four_layers(self):
        f_dd = 43.5e3
        tau = 0.1 / f_dd
        theta = (tau, 0.3, tau) * 4
        result = PreparationTimeService.preparation_time(theta, f_dd)
        assert result.fdd_t == pytest.approx(0.8)
        assert result.seconds == pytest.approx(8 * tau)

    def test_worked_example(self):
        result = PreparationTimeService.from_fdd_t(0.8, 43.5e3)
        assert float(f'{result.seconds:.4g}') == 1.839e-5

    def test_angles_do_not_count(self):
        a = PreparationTimeService.preparation_time((1e-6, 0.0, 2e-6), 1e5)
        b = PreparationTimeService.preparation_time((1e-6, 5.0, 2e-6), 1e5)
        assert a == b

    def test_speedup(self):
        prep = PreparationTimeService.from_fdd_t(0.8, 43.5e3)
        assert PreparationTimeService.speedup_over(11 * prep.seconds, prep) == pytest.approx(11.0)

    def test_rejects_bad_input(self):
        with pytest.raises(InvalidParameterError):
            PreparationTimeService.preparation_time((1.0, 2.0), 1e3)
        with pytest.raises(InvalidParameterError):
            PreparationTimeService.preparation_time((1.0, 2.0, 3.0), 0.0)
