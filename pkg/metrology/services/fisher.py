"""
Fisher Information Service - classical Fisher information of the readout.
"""
import logging

import numpy as np
from django.conf import settings

from dipolarvqe.exceptions import InvalidParameterError, ZeroProbabilityError
from engine.dto import QuantumState
from engine.services.gates import GateService
from metrology.dto import MeasurementBasis, OutcomeDistribution
from metrology.services.measurement import MeasurementService

logger = logging.getLogger(__name__)


class FisherInformationService:
    """Service for CFI with respect to the Ramsey phase and frequency."""

    @staticmethod
    def cfi_from_distribution(distribution: OutcomeDistribution, n: int) -> float:
        """
        CFI = sum_z (dP_z)^2 / P_z.

        Outcomes with P_z < ZERO_PROBABILITY and |dP_z| < ZERO_DERIVATIVE are
        dropped. A vanishing P_z with a larger derivative is kept while
        (dP_z)^2/P_z stays within N^2, the ceiling for N spins, and raises
        otherwise.

        Raises:
            ZeroProbabilityError: Inconsistent zero-probability outcome
        """
        if distribution.derivative is None:
            raise InvalidParameterError('distribution', 'derivative is required for the CFI')
        sim = settings.SIMULATION
        p_floor = sim['ZERO_PROBABILITY']
        d_floor = sim['ZERO_DERIVATIVE']
        ceiling = n * n * (1.0 + 1e-6)

        total = 0.0
        for outcome, (p, dp) in enumerate(zip(distribution.probabilities, distribution.derivative)):
            if p < p_floor:
                if abs(dp) < d_floor:
                    continue
                if p <= 0.0 or dp * dp / p > ceiling:
                    raise ZeroProbabilityError(outcome, float(p), float(dp))
            total += dp * dp / p
        return float(total)

    @staticmethod
    def cfi_phi(
        state: QuantumState,
        basis: MeasurementBasis | str = MeasurementBasis.FULL_Z,
        readout_fidelity: float = 1.0,
        phi: float = 0.0,
    ) -> float:
        """
        Classical Fisher information of the phase.

        Args:
            state: Prepared state
            basis: full-z, total-jz or parity
            readout_fidelity: RF in [0.5, 1]
            phi: Operating point; the state is rotated by exp(-i phi J_y)
                first

        Returns:
            float: CFI_phi in [0, N^2]
        """
        if phi != 0.0:
            state = GateService.ramsey_phase(state, phi)
        distribution = MeasurementService.distribution_with_derivative(state, basis, readout_fidelity)
        return FisherInformationService.cfi_from_distribution(distribution, state.n_spins)

    @staticmethod
    def cfi_omega(cfi_phi_value: float, t_r: float) -> float:
        """CFI_omega = CFI_phi * t_R^2."""
        if t_r < 0:
            raise InvalidParameterError('t_R', f'must be non-negative, got {t_r}')
        return cfi_phi_value * t_r * t_r

    @staticmethod
    def finite_difference_cfi(family, phi0: float, step: float = 1e-5) -> float:
        """CFI of a distribution family phi -> OutcomeDistribution by central differences."""
        p = family(phi0).probabilities
        derivative = (family(phi0 + step).probabilities - family(phi0 - step).probabilities) / (2 * step)
        mask = p > settings.SIMULATION['ZERO_PROBABILITY']
        return float(np.sum(derivative[mask] ** 2 / p[mask]))
