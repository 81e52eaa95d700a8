"""
Unit tests for EntanglerService.
"""
import numpy as np
import pytest
from django.test import SimpleTestCase
from pydantic import ValidationError
from scipy.linalg import expm

from dipolarvqe.exceptions import DimensionMismatchError
from engine.dto import CircuitParams, PrepNoiseSpec
from engine.services import EntanglerService, GateService
from ensemble.operators import SpinOperators
from ensemble.services import ConfigurationService, CouplingService, HamiltonianService


def chain_hamiltonian(n, model='dipolar-spin-half'):
    config = ConfigurationService.generate_configuration('chain', n, 10.0, model=model)
    coupling = CouplingService.coupling_matrix(config)
    f_dd = CouplingService.mean_nn_coupling(coupling, config)
    return HamiltonianService.build_hamiltonian(coupling, model), 1.0 / f_dd


def random_params(m, tau_bound, rng):
    theta = []
    for _ in range(m):
        theta.extend([rng.uniform(0, tau_bound), rng.uniform(0, 2 * np.pi), rng.uniform(0, tau_bound)])
    return CircuitParams(m=m, theta=tuple(theta), tau_bound=tau_bound)


class TestCircuitParams(SimpleTestCase):
    """Tests for the parameter container."""

    def test_rejects_wrong_length(self):
        with pytest.raises(ValidationError):
            CircuitParams(m=2, theta=(0.0,) * 5, tau_bound=1.0)

    def test_rejects_out_of_box(self):
        with pytest.raises(ValidationError):
            CircuitParams(m=1, theta=(2.0, 0.0, 0.0), tau_bound=1.0)

    def test_from_vector_wraps_angles(self):
        params = CircuitParams.from_vector([0.5, -0.5, 1.0, 0.2, 7.0, 0.0], tau_bound=1.0)
        assert np.isclose(params.theta[1], 2 * np.pi - 0.5)
        assert np.isclose(params.theta[4], 7.0 - 2 * np.pi)
        assert params.total_interaction_time == pytest.approx(1.7)


class TestEntanglerService(SimpleTestCase):
    """Tests for the variational circuit."""

    def setUp(self):
        self.rng = np.random.default_rng(2024)
        self.h2, self.bound2 = chain_hamiltonian(2)
        self.css2 = GateService.initial_state(2)

    def test_zero_parameters_are_identity(self):
        params = CircuitParams.zeros(3, self.bound2)
        output = EntanglerService.apply_entangler(params, self.h2, self.css2)
        assert np.allclose(output.data, self.css2.data)

    def test_matches_explicit_matrix_chain(self):
        tau, angle, tau_prime = 0.31 * self.bound2, 1.234, 0.77 * self.bound2
        params = CircuitParams(m=1, theta=(tau, angle, tau_prime), tau_bound=self.bound2)
        h = self.h2.matrix
        jx = SpinOperators.collective('x', 2)
        jy = SpinOperators.collective('y', 2)
        layer = (
            expm(-1j * np.pi / 2 * jy)
            @ expm(-1j * tau_prime * h)
            @ expm(1j * np.pi / 2 * jy)
            @ expm(-1j * angle * jx)
            @ expm(-1j * tau * h)
        )
        output = EntanglerService.apply_entangler(params, self.h2, self.css2)
        assert np.allclose(output.data, layer @ self.css2.data, atol=1e-10)

    def test_layers_compose_in_order(self):
        params = random_params(3, self.bound2, self.rng)
        step = self.css2
        for k in range(3):
            layer = CircuitParams(m=1, theta=params.theta[3 * k:3 * k + 3], tau_bound=self.bound2)
            step = EntanglerService.apply_entangler(layer, self.h2, step)
        output = EntanglerService.apply_entangler(params, self.h2, self.css2)
        assert np.allclose(output.data, step.data, atol=1e-10)

    def test_parity_conservation(self):
        h4, bound4 = chain_hamiltonian(4)
        css4 = GateService.initial_state(4)
        jy = SpinOperators.collective('y', 4)
        jz = SpinOperators.collective('z', 4)
        for _ in range(100):
            output = EntanglerService.apply_entangler(random_params(3, bound4, self.rng), h4, css4)
            assert abs(output.expectation(jy)) < 1e-9
            assert abs(output.expectation(jz)) < 1e-9
            assert abs(np.linalg.norm(output.data) - 1.0) < 1e-10

    def test_density_path_matches_pure_path(self):
        h3, bound3 = chain_hamiltonian(3, model='nv-effective')
        css3 = GateService.initial_state(3)
        params = random_params(2, bound3, self.rng)
        pure = EntanglerService.apply_entangler(params, h3, css3)
        density = EntanglerService.apply_entangler(params, h3, css3.as_density())
        assert np.allclose(density.data, np.outer(pure.data, pure.data.conj()), atol=1e-8)

    def test_dephasing_during_windows_mixes_state(self):
        params = random_params(2, self.bound2, self.rng)
        noise = PrepNoiseSpec(t2_prep=0.5 * self.bound2)
        noisy = EntanglerService.apply_entangler(params, self.h2, self.css2, noise)
        assert not noisy.is_pure
        assert noisy.purity() < 0.99
        assert abs(np.trace(noisy.data) - 1.0) < 1e-9

    def test_infinite_t2_keeps_pure_path(self):
        params = random_params(1, self.bound2, self.rng)
        output = EntanglerService.apply_entangler(params, self.h2, self.css2, PrepNoiseSpec())
        assert output.is_pure

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            EntanglerService.apply_entangler(
                CircuitParams.zeros(1, self.bound2), self.h2, GateService.initial_state(3)
            )
