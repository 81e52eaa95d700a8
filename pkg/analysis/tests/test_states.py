"""
Unit tests for reference states, entropies and cluster partitions.
"""
import math

import numpy as np
import pytest
from django.test import SimpleTestCase

from analysis.services import ClusterService, EntropyService, ReferenceStateService
from dipolarvqe.exceptions import InvalidParameterError, InvalidSubsetError
from engine.dto import QuantumState
from ensemble.operators import SpinOperators
from metrology.services import FisherInformationService

BELL = np.array([1.0, 0.0, 0.0, 1.0], dtype=complex) / math.sqrt(2)


def random_pure(n, rng):
    vector = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    return QuantumState.pure(vector / np.linalg.norm(vector))


class TestReferenceStateService(SimpleTestCase):
    """Tests for the exact reference constructions."""

    def test_single_spin_css(self):
        state = ReferenceStateService.reference_state('css', 1)
        assert np.allclose(state.data, np.array([1.0, 1.0]) / math.sqrt(2))

    def test_css_is_x_polarized(self):
        state = ReferenceStateService.reference_state('css', 4)
        assert state.expectation(SpinOperators.collective('x', 4)) == pytest.approx(2.0)

    def test_ghz_z_is_bell_pair(self):
        state = ReferenceStateService.reference_state('ghz-z', 2)
        assert np.allclose(state.data, BELL)
        assert EntropyService.von_neumann_entropy(state, (0,)) == pytest.approx(1.0)

    def test_ghz_y_reaches_heisenberg_limit_in_parity(self):
        state = ReferenceStateService.reference_state('ghz-y', 3)
        assert FisherInformationService.cfi_phi(state, 'parity') == pytest.approx(9.0, abs=1e-9)

    def test_ghz_phase(self):
        state = ReferenceStateService.reference_state('ghz-z', 2, phase=math.pi)
        assert np.allclose(state.data, np.array([1.0, 0.0, 0.0, -1.0]) / math.sqrt(2))

    def test_dicke_state(self):
        state = ReferenceStateService.reference_state('dicke', 4)
        assert np.count_nonzero(state.data) == math.comb(4, 2)
        assert abs(state.expectation(SpinOperators.collective('z', 4))) < 1e-12
        assert EntropyService.von_neumann_entropy(state, (1,)) == pytest.approx(1.0)

    def test_rejects_bad_arguments(self):
        with pytest.raises(InvalidParameterError):
            ReferenceStateService.reference_state('css', 0)
        with pytest.raises(InvalidParameterError):
            ReferenceStateService.reference_state('dicke', 3, excitations=4)
        with pytest.raises(ValueError):
            ReferenceStateService.reference_state('ghz-w', 3)


class TestEntropyService(SimpleTestCase):
    """Tests for von Neumann entropies."""

    def setUp(self):
        self.rng = np.random.default_rng(17)

    def test_product_state_has_no_entanglement(self):
        state = ReferenceStateService.reference_state('css', 3)
        for i in range(3):
            assert EntropyService.von_neumann_entropy(state, (i,)) == pytest.approx(0.0, abs=1e-12)

    def test_ghz_marginal_is_one_bit(self):
        state = ReferenceStateService.reference_state('ghz-x', 4)
        assert EntropyService.single_spin_entropies(state) == pytest.approx([1.0] * 4)

    def test_bell_pairs_cut_between_pairs(self):
        state = QuantumState.pure(np.kron(BELL, BELL))
        assert EntropyService.von_neumann_entropy(state, (0, 1)) == pytest.approx(0.0, abs=1e-12)
        assert EntropyService.von_neumann_entropy(state, (0, 2)) == pytest.approx(2.0)

    def test_complement_symmetry(self):
        state = random_pure(4, self.rng)
        left = EntropyService.von_neumann_entropy(state, (0, 2))
        right = EntropyService.von_neumann_entropy(state, (1, 3))
        assert abs(left - right) < 1e-9

    def test_density_matches_pure_path(self):
        state = random_pure(3, self.rng)
        pure = EntropyService.reduced_density(state, (0, 2))
        mixed = EntropyService.reduced_density(state.as_density(), (0, 2))
        assert np.allclose(pure, mixed, atol=1e-12)

    def test_maximally_mixed_spin(self):
        state = QuantumState.density(np.eye(4) / 4)
        assert EntropyService.von_neumann_entropy(state, (1,)) == pytest.approx(1.0)

    def test_rejects_invalid_subsets(self):
        state = ReferenceStateService.reference_state('css', 3)
        for subset in ((), (0, 1, 2), (3,), (-1,)):
            with pytest.raises(InvalidSubsetError):
                EntropyService.von_neumann_entropy(state, subset)


class TestClusterService(SimpleTestCase):
    """Tests for entanglement-cluster segmentation."""

    def test_product_state_splits_into_singletons(self):
        partition = ClusterService.cluster_partition(ReferenceStateService.reference_state('css', 4))
        assert partition.blocks == ((0,), (1,), (2,), (3,))
        assert partition.max_size == 1

    def test_bell_pairs(self):
        partition = ClusterService.cluster_partition(QuantumState.pure(np.kron(BELL, BELL)))
        assert partition.blocks == ((0, 1), (2, 3))
        assert partition.entropies == pytest.approx((0.0, 0.0), abs=1e-12)

    def test_interleaved_bell_pairs(self):
        # spins 0-2 and 1-3 share the pairs
        vector = np.kron(BELL, BELL).reshape(2, 2, 2, 2).transpose(0, 2, 1, 3).reshape(16)
        partition = ClusterService.cluster_partition(QuantumState.pure(vector))
        assert partition.blocks == ((0, 2), (1, 3))

    def test_ghz_is_one_cluster(self):
        partition = ClusterService.cluster_partition(ReferenceStateService.reference_state('ghz-x', 4))
        assert partition.blocks == ((0, 1, 2, 3),)
        assert partition.entropies == (0.0,)

    def test_bell_pair_with_free_spin(self):
        vector = np.kron(BELL, np.array([1.0, 0.0]))
        partition = ClusterService.cluster_partition(QuantumState.pure(vector))
        assert partition.sizes == [2, 1]

    def test_threshold_is_respected(self):
        rng = np.random.default_rng(5)
        state = random_pure(4, rng)
        partition = ClusterService.cluster_partition(state, threshold=0.4)
        assert all(e <= 0.4 for e in partition.entropies)
        again = ClusterService.cluster_partition(state, threshold=0.4)
        assert again == partition

    def test_rejects_bad_threshold(self):
        with pytest.raises(InvalidParameterError):
            ClusterService.cluster_partition(ReferenceStateService.reference_state('css', 2), threshold=0.0)
