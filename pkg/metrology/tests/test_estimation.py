"""
Unit tests for EstimationService.
"""
from functools import partial

import numpy as np
import pytest
from django.test import SimpleTestCase

from dipolarvqe.exceptions import InvalidParameterError, NonIdentifiableError
from engine.services import GateService
from metrology.dto import OutcomeDistribution
from metrology.services import EstimationService, MeasurementService


def css_family(n):
    return partial(MeasurementService.outcome_distribution, GateService.initial_state(n), 'full-z', 1.0)


def flat_family(_phi):
    return OutcomeDistribution(probabilities=np.full(4, 0.25), basis='full-z')


class TestMleSimulate(SimpleTestCase):
    """Monte-Carlo checks of the Cramér-Rao bound."""

    def setUp(self):
        self.family = css_family(2)

    def test_saturates_cramer_rao_bound(self):
        result = EstimationService.mle_simulate(self.family, 0.3, shots=10_000, trials=500, seed=11)
        assert result.cfi == pytest.approx(2.0, rel=1e-6)
        assert abs(result.variance - result.cramer_rao) < 3 * result.variance_se
        assert abs(result.bias) < 3 * result.bias_se
        assert result.boundary_hits == 0

    def test_variance_scales_inversely_with_shots(self):
        small = EstimationService.mle_simulate(self.family, 0.3, shots=2_000, trials=300, seed=3)
        large = EstimationService.mle_simulate(self.family, 0.3, shots=4_000, trials=300, seed=4)
        assert 1.3 < small.variance / large.variance < 2.7

    def test_deterministic_for_fixed_seed(self):
        first = EstimationService.mle_simulate(self.family, 0.0, shots=500, trials=20, seed=9)
        second = EstimationService.mle_simulate(self.family, 0.0, shots=500, trials=20, seed=9)
        assert first == second

    def test_flat_likelihood_is_rejected(self):
        with pytest.raises(NonIdentifiableError):
            EstimationService.mle_simulate(flat_family, 0.0, shots=1_000, trials=10, seed=1)

    def test_rejects_small_budgets(self):
        with pytest.raises(InvalidParameterError):
            EstimationService.mle_simulate(self.family, 0.0, shots=50, trials=10)
        with pytest.raises(InvalidParameterError):
            EstimationService.mle_simulate(self.family, 0.0, shots=1_000, trials=1)
