"""
Unit tests for GateService.
"""
import numpy as np
import pytest
from django.test import SimpleTestCase

from dipolarvqe.exceptions import DimensionMismatchError, InvalidParameterError
from engine.dto import QuantumState
from engine.services import GateService
from ensemble.dto import CouplingMatrix
from ensemble.operators import SpinOperators
from ensemble.services import HamiltonianService


def single_spin_entropy(vector, n):
    tensor = vector.reshape(2, -1)
    rho = tensor @ tensor.conj().T
    eigenvalues = np.linalg.eigvalsh(rho)
    eigenvalues = eigenvalues[eigenvalues > 1e-14]
    return float(-np.sum(eigenvalues * np.log2(eigenvalues)))


def random_pure(n, rng):
    vector = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    return QuantumState.pure(vector / np.linalg.norm(vector))


class TestGlobalRotation(SimpleTestCase):
    """Tests for global rotations."""

    def setUp(self):
        self.rng = np.random.default_rng(12)

    def test_zero_angle_is_identity(self):
        state = random_pure(3, self.rng)
        rotated = GateService.global_rotation(state, 'x', 0.0)
        assert np.allclose(rotated.data, state.data)

    def test_up_state_rotates_to_plus_x(self):
        up = np.zeros(8, dtype=complex)
        up[0] = 1.0
        rotated = GateService.global_rotation(QuantumState.pure(up), 'y', np.pi / 2)
        for i in range(3):
            assert np.isclose(rotated.expectation(SpinOperators.single('x', i, 3)), 0.5)
        assert np.allclose(rotated.data, GateService.initial_state(3).data)

    def test_full_turn_on_pure_and_density(self):
        state = random_pure(2, self.rng)
        twice = GateService.global_rotation(GateService.global_rotation(state, 'x', np.pi), 'x', np.pi)
        assert np.allclose(twice.data, state.data)  # (-1)^2
        single = random_pure(1, self.rng)
        turned = GateService.global_rotation(single, 'x', 2 * np.pi)
        assert np.allclose(turned.data, -single.data)

        density = state.as_density()
        turned_density = GateService.global_rotation(density, 'x', 2 * np.pi)
        assert np.allclose(turned_density.data, density.data)

    def test_matches_collective_exponential(self):
        from scipy.linalg import expm

        state = random_pure(3, self.rng)
        for axis in 'xyz':
            expected = expm(-1j * 0.83 * SpinOperators.collective(axis, 3)) @ state.data
            assert np.allclose(GateService.global_rotation(state, axis, 0.83).data, expected)

    def test_density_path_matches_pure_path(self):
        state = random_pure(3, self.rng)
        pure = GateService.global_rotation(state, 'y', 1.1)
        density = GateService.global_rotation(state.as_density(), 'y', 1.1)
        assert np.allclose(density.data, np.outer(pure.data, pure.data.conj()), atol=1e-12)

    def test_rejects_unknown_axis(self):
        with pytest.raises(InvalidParameterError):
            GateService.global_rotation(GateService.initial_state(1), 'w', 1.0)


class TestInteractionEvolution(SimpleTestCase):
    """Tests for interaction windows."""

    def setUp(self):
        self.v = 1.7e5
        coupling = CouplingMatrix(v=np.array([[0.0, self.v], [self.v, 0.0]]))
        self.ising = HamiltonianService.build_hamiltonian(coupling, 'ising')
        self.dipolar = HamiltonianService.build_hamiltonian(coupling, 'dipolar-spin-half')
        self.css = GateService.initial_state(2)

    def test_zero_duration_is_identity(self):
        evolved = GateService.interaction_evolution(self.css, self.dipolar, 0.0)
        assert np.allclose(evolved.data, self.css.data)

    def test_negative_duration_rejected(self):
        with pytest.raises(InvalidParameterError):
            GateService.interaction_evolution(self.css, self.dipolar, -1e-9)

    def test_ising_pi_phase_entangles(self):
        tau = np.pi / (2 * self.v)
        evolved = GateService.interaction_evolution(self.css, self.ising, tau)
        assert np.isclose(single_spin_entropy(evolved.data, 2), 1.0, atol=1e-10)

    def test_semigroup(self):
        first = GateService.interaction_evolution(self.css, self.dipolar, 2e-6)
        both = GateService.interaction_evolution(first, self.dipolar, 3e-6)
        once = GateService.interaction_evolution(self.css, self.dipolar, 5e-6)
        assert np.allclose(both.data, once.data, atol=1e-9)

    def test_norm_preserved(self):
        evolved = GateService.interaction_evolution(self.css, self.dipolar, 7.3e-6)
        assert abs(np.linalg.norm(evolved.data) - 1.0) < 1e-10

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            GateService.interaction_evolution(GateService.initial_state(3), self.dipolar, 1e-6)


class TestRamseyPhase(SimpleTestCase):
    """Tests for the signal rotation."""

    def setUp(self):
        self.state = random_pure(2, np.random.default_rng(4))

    def test_zero_phase_is_identity(self):
        assert np.allclose(GateService.ramsey_phase(self.state, 0.0).data, self.state.data)

    def test_full_turn_keeps_probabilities(self):
        single = GateService.initial_state(1)
        turned = GateService.ramsey_phase(single, 2 * np.pi)
        assert np.allclose(turned.probabilities(), single.probabilities())

    def test_composition(self):
        composed = GateService.ramsey_phase(GateService.ramsey_phase(self.state, 0.4), 0.9)
        direct = GateService.ramsey_phase(self.state, 1.3)
        assert np.allclose(composed.data, direct.data)


class TestInitialState(SimpleTestCase):
    """Tests for state preparation."""

    def test_perfect_initialization_is_pure(self):
        state = GateService.initial_state(4, 1.0)
        assert state.is_pure
        assert state.purity() == 1.0

    def test_zero_polarization_is_maximally_mixed(self):
        state = GateService.initial_state(3, 0.0)
        assert np.isclose(state.purity(), 2.0 ** -3)

    def test_partial_polarization_bloch_vector(self):
        state = GateService.initial_state(1, 0.9)
        assert np.isclose(2 * state.expectation(SpinOperators.single('x', 0, 1)), 0.9)
        assert np.isclose(state.expectation(SpinOperators.single('y', 0, 1)), 0.0)

    def test_rejects_out_of_range(self):
        with pytest.raises(InvalidParameterError):
            GateService.initial_state(2, 1.5)
