"""
Estimation Service - Monte-Carlo maximum-likelihood phase estimation.
"""
import logging
import math
from typing import Callable, Optional

import numpy as np
from scipy.optimize import minimize_scalar

from dipolarvqe.exceptions import InvalidParameterError, NonIdentifiableError
from metrology.dto import MleResult, OutcomeDistribution
from metrology.services.fisher import FisherInformationService

logger = logging.getLogger(__name__)

DistributionFamily = Callable[[float], OutcomeDistribution]

LOG_FLOOR = 1e-300


class EstimationService:
    """Service for checking estimators against the Cramér-Rao bound."""

    @staticmethod
    def mle_estimate(
        family: DistributionFamily,
        counts: np.ndarray,
        lower: float,
        upper: float,
    ) -> float:
        """Maximize the multinomial log-likelihood over [lower, upper]."""
        def negative_log_likelihood(phi):
            p = family(phi).probabilities
            return -float(np.sum(counts * np.log(np.maximum(p, LOG_FLOOR))))

        result = minimize_scalar(
            negative_log_likelihood,
            bounds=(lower, upper),
            method='bounded',
            options={'xatol': 1e-10},
        )
        return float(result.x)

    @staticmethod
    def mle_simulate(
        family: DistributionFamily,
        phi0: float,
        shots: int,
        trials: int,
        seed: Optional[int] = None,
    ) -> MleResult:
        """
        Sample outcome counts and estimate the phase by maximum likelihood.

        Args:
            family: phi -> OutcomeDistribution, smooth near phi0
            phi0: True phase
            shots: Outcomes per trial (M >= 100)
            trials: Independent repetitions (>= 2)
            seed: RNG seed

        Returns:
            MleResult: Mean and variance of the estimates next to 1/(M CFI)

        Raises:
            InvalidParameterError: Too few shots or trials
            NonIdentifiableError: Flat likelihood at phi0
        """
        if shots < 100:
            raise InvalidParameterError('shots', f'must be at least 100, got {shots}')
        if trials < 2:
            raise InvalidParameterError('trials', f'must be at least 2, got {trials}')

        cfi = FisherInformationService.finite_difference_cfi(family, phi0)
        if cfi < 1e-12:
            raise NonIdentifiableError(phi0)

        # ten standard deviations of the asymptotic estimator
        width = min(10.0 / math.sqrt(shots * cfi), math.pi / 2)
        lower, upper = phi0 - width, phi0 + width
        probabilities = family(phi0).probabilities

        rng = np.random.default_rng(seed)
        estimates = np.empty(trials)
        boundary_hits = 0
        for trial in range(trials):
            counts = rng.multinomial(shots, probabilities)
            estimates[trial] = EstimationService.mle_estimate(family, counts, lower, upper)
            if min(estimates[trial] - lower, upper - estimates[trial]) < 1e-6 * width:
                boundary_hits += 1

        if boundary_hits:
            logger.warning(f'{boundary_hits}/{trials} estimates reached the search interval edge')

        variance = float(np.var(estimates, ddof=1))
        result = MleResult(
            phi0=phi0,
            shots=shots,
            trials=trials,
            mean=float(np.mean(estimates)),
            variance=variance,
            variance_se=variance * math.sqrt(2.0 / (trials - 1)),
            bias_se=math.sqrt(variance / trials),
            cfi=cfi,
            cramer_rao=1.0 / (shots * cfi),
            boundary_hits=boundary_hits,
        )
        logger.info(
            f'MLE over {trials} trials of {shots} shots: variance {variance:.4e}, '
            f'bound {result.cramer_rao:.4e}'
        )
        return result
