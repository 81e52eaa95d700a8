"""
Unit tests for LieAlgebraService.
"""
import numpy as np
import pytest
from django.test import SimpleTestCase

from controllability.services import LieAlgebraService, pauli_strings
from dipolarvqe.exceptions import InvalidParameterError, NonHermitianGeneratorError
from ensemble.operators import PAULI


class TestPauliCoefficients(SimpleTestCase):
    """Tests for the operator representation."""

    def test_strings_are_orthogonal(self):
        stack = pauli_strings(2)
        gram = np.einsum('aij,bji->ab', stack, stack) / 4
        assert np.allclose(gram, np.eye(16))

    def test_coefficients_reconstruct_operator(self):
        rng = np.random.default_rng(3)
        a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        h = a + a.conj().T
        coefficients = LieAlgebraService.to_pauli(h, 2)
        assert np.allclose(LieAlgebraService.from_pauli(coefficients, 2), h)


class TestLieClosure(SimpleTestCase):
    """Tests for the closure algorithm."""

    def test_single_qubit_su2(self):
        closure = LieAlgebraService.lie_closure([PAULI['x'], PAULI['y']])
        assert closure.dimension == 3
        assert closure.dimension_with_identity == 4

    def test_dipolar_two_spins(self):
        # su(3) on the triplet; the traceless drift vanishes on the singlet
        closure = LieAlgebraService.lie_closure(LieAlgebraService.system_generators(2, 'dipolar'))
        assert closure.dimension == 8
        assert closure.dimension_with_identity == 9

    def test_dipolar_three_spins(self):
        closure = LieAlgebraService.lie_closure(LieAlgebraService.system_generators(3, 'dipolar'))
        assert closure.dimension == 38
        assert closure.dimension_with_identity == 39

    @pytest.mark.slow
    def test_dipolar_four_spins(self):
        closure = LieAlgebraService.lie_closure(LieAlgebraService.system_generators(4, 'dipolar'))
        assert closure.dimension_with_identity == 225

    def test_symmetric_ising(self):
        for n, expected in ((2, 9), (3, 19)):
            closure = LieAlgebraService.lie_closure(LieAlgebraService.system_generators(n, 'symmetric-ising'))
            assert closure.dimension == expected

    def test_symmetric_ising_has_one_block_trace_direction(self):
        # su(5) + su(3) on the J = 2 and J = 1 blocks plus the drift's block-trace part
        closure = LieAlgebraService.lie_closure(LieAlgebraService.system_generators(4, 'symmetric-ising'))
        assert closure.dimension == 24 + 8 + 1
        assert closure.dimension_with_identity == 34

    @pytest.mark.slow
    def test_symmetric_ising_five_spins(self):
        # su(6) + su(4) + su(2) plus one block-trace direction
        closure = LieAlgebraService.lie_closure(LieAlgebraService.system_generators(5, 'symmetric-ising'))
        assert closure.dimension == 35 + 15 + 3 + 1
        assert closure.dimension_with_identity == 55

    def test_basis_is_orthonormal_and_hermitian(self):
        closure = LieAlgebraService.lie_closure(LieAlgebraService.system_generators(2, 'dipolar'))
        assert np.allclose(closure.basis @ closure.basis.T, np.eye(closure.dimension), atol=1e-10)
        assert np.allclose(closure.basis[:, 0], 0.0)
        for row in closure.basis:
            h = LieAlgebraService.from_pauli(row, 2)
            assert np.max(np.abs(h - h.conj().T)) < 1e-12

    def test_basis_is_closed_under_commutators(self):
        closure = LieAlgebraService.lie_closure(LieAlgebraService.system_generators(3, 'symmetric-ising'))
        basis = closure.basis
        brackets = LieAlgebraService._commutators(basis, basis, 3)
        residual = brackets - (brackets @ basis.T) @ basis
        assert np.max(np.abs(residual)) < 1e-8

    def test_independent_of_generator_order_and_mixing(self):
        generators = LieAlgebraService.system_generators(3, 'symmetric-ising')
        reversed_closure = LieAlgebraService.lie_closure(generators[::-1])
        rng = np.random.default_rng(8)
        mixing = rng.normal(size=(3, 3)) + 3 * np.eye(3)
        mixed = [sum(mixing[i, j] * generators[j] for j in range(3)) for i in range(3)]
        assert reversed_closure.dimension == 19
        assert LieAlgebraService.lie_closure(mixed).dimension == 19

    def test_round_budget_gives_lower_bound(self):
        closure = LieAlgebraService.lie_closure(
            LieAlgebraService.system_generators(3, 'dipolar'), max_rounds=1,
        )
        assert closure.exhausted
        assert closure.rounds == 1
        assert closure.dimension < 39

    def test_rejects_non_hermitian(self):
        with pytest.raises(NonHermitianGeneratorError):
            LieAlgebraService.lie_closure([PAULI['x'], np.array([[0, 1], [0, 0]], dtype=complex)])

    def test_rejects_empty_generators(self):
        with pytest.raises(InvalidParameterError):
            LieAlgebraService.lie_closure([])


class TestControllabilityReport(SimpleTestCase):
    """Tests for the controllability verdicts."""

    def test_two_spin_dipolar_is_subspace_controllable(self):
        report = LieAlgebraService.controllability_report(2, 'dipolar')
        assert (report.dimension_with_identity, report.lower_bound, report.upper_bound) == (9, 9, 15)
        assert report.dimension == 8
        assert report.verdict == 'subspace'

    def test_four_spin_symmetric_ising_meets_subspace_bound(self):
        report = LieAlgebraService.controllability_report(4, 'symmetric-ising')
        assert (report.dimension, report.dimension_with_identity, report.lower_bound) == (33, 34, 34)
        assert report.verdict == 'subspace'

    def test_global_rotations_alone_are_restricted(self):
        report = LieAlgebraService.controllability_report(2, 'global-only')
        assert report.dimension == 3
        assert report.verdict == 'restricted'

    @pytest.mark.slow
    def test_four_spin_dipolar_bounds(self):
        report = LieAlgebraService.controllability_report(4, 'dipolar')
        assert (report.dimension_with_identity, report.lower_bound, report.upper_bound) == (225, 34, 255)
        assert report.verdict == 'subspace'

    def test_single_qubit_is_complete(self):
        report = LieAlgebraService.controllability_report(1, 'global-only')
        assert report.dimension == 3
        assert report.verdict == 'complete'

    def test_document(self):
        document = LieAlgebraService.controllability_report(3, 'symmetric-ising').to_document()
        assert document['system'] == 'symmetric-ising'
        assert document['dimension'] == 19
        assert document['dimension_label'] == '19'

    def test_rejects_large_systems(self):
        with pytest.raises(InvalidParameterError):
            LieAlgebraService.controllability_report(6, 'symmetric-ising')
        with pytest.raises(InvalidParameterError):
            LieAlgebraService.controllability_report(1, 'dipolar')
