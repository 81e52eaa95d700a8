"""
Measurement Service - outcome distributions and their phase derivatives.

The readout is modelled per qubit: the full-z distribution passes through N
independent symmetric bit-flip channels with flip probability 1 - RF, and
the total-jz and parity distributions are aggregated from the noisy
full-z one.
"""
import logging

import numpy as np

from dipolarvqe.exceptions import InvalidParameterError
from engine.dto import QuantumState
from engine.services.gates import GateService, apply_collective
from ensemble.operators import SpinOperators
from metrology.dto import MeasurementBasis, OutcomeDistribution

logger = logging.getLogger(__name__)


class MeasurementService:
    """Service for measurement statistics of the Ramsey readout."""

    @staticmethod
    def check_readout_fidelity(readout_fidelity: float) -> None:
        if not 0.5 <= readout_fidelity <= 1.0:
            raise InvalidParameterError(
                'readout_fidelity', f'must lie in [0.5, 1], got {readout_fidelity}'
            )

    @staticmethod
    def readout_channel(values: np.ndarray, readout_fidelity: float, n: int) -> np.ndarray:
        """
        Push a full-z vector through N symmetric binary channels.

        The channel is linear and phase independent, so the same map applies
        to probabilities and to their derivatives.
        """
        if readout_fidelity == 1.0 or n == 0:
            return np.array(values, dtype=float)
        flip = 1.0 - readout_fidelity
        channel = np.array([[readout_fidelity, flip], [flip, readout_fidelity]])
        tensor = np.asarray(values, dtype=float).reshape((2,) * n)
        for k in range(n):
            tensor = np.moveaxis(np.tensordot(channel, tensor, axes=([1], [k])), 0, k)
        return tensor.reshape(-1)

    @staticmethod
    def aggregate(values: np.ndarray, basis: MeasurementBasis | str, n: int) -> np.ndarray:
        """
        Collapse a full-z vector onto the outcomes of a coarser basis.

        Args:
            values: Length-2^N probabilities or derivatives
            basis: Target basis
            n: Number of spins

        Returns:
            np.ndarray: full-z unchanged; total-jz indexed by the number of
            down spins k (J_z = N/2 - k); parity as (even, odd)
        """
        basis = MeasurementBasis(basis)
        if basis == MeasurementBasis.FULL_Z:
            return values
        downs = SpinOperators.basis_bits(n).sum(axis=1)
        if basis == MeasurementBasis.TOTAL_JZ:
            return np.bincount(downs, weights=values, minlength=n + 1)
        return np.bincount(downs % 2, weights=values, minlength=2)

    @staticmethod
    def full_z_derivative(state: QuantumState) -> np.ndarray:
        """
        dP_z/dphi at phi = 0 for the signal exp(-i phi J_y).

        Pure states: 2 Im(conj(psi_z) (J_y psi)_z). Density matrices:
        2 Im((J_y rho)_zz).
        """
        generated = apply_collective(state.data, 'y', state.n_spins)
        if state.is_pure:
            return 2.0 * np.imag(np.conj(state.data) * generated)
        return 2.0 * np.imag(np.diagonal(generated))

    @staticmethod
    def outcome_distribution(
        state: QuantumState,
        basis: MeasurementBasis | str = MeasurementBasis.FULL_Z,
        readout_fidelity: float = 1.0,
        phi: float = 0.0,
    ) -> OutcomeDistribution:
        """
        Outcome probabilities after an optional extra signal phase.

        Args:
            state: Prepared state
            basis: full-z, total-jz or parity
            readout_fidelity: RF in [0.5, 1]
            phi: Signal phase applied as exp(-i phi J_y) before readout

        Returns:
            OutcomeDistribution: Probabilities only

        Raises:
            InvalidParameterError: RF out of range
        """
        MeasurementService.check_readout_fidelity(readout_fidelity)
        if phi != 0.0:
            state = GateService.ramsey_phase(state, phi)
        n = state.n_spins
        noisy = MeasurementService.readout_channel(state.probabilities(), readout_fidelity, n)
        probabilities = MeasurementService.aggregate(noisy, basis, n)
        return OutcomeDistribution(probabilities=probabilities / probabilities.sum(), basis=basis)

    @staticmethod
    def distribution_derivative(
        state: QuantumState,
        basis: MeasurementBasis | str = MeasurementBasis.FULL_Z,
        readout_fidelity: float = 1.0,
    ) -> np.ndarray:
        """dP/dphi at phi = 0 in the requested basis, readout noise included."""
        MeasurementService.check_readout_fidelity(readout_fidelity)
        n = state.n_spins
        derivative = MeasurementService.readout_channel(
            MeasurementService.full_z_derivative(state), readout_fidelity, n
        )
        return MeasurementService.aggregate(derivative, basis, n)

    @staticmethod
    def distribution_with_derivative(
        state: QuantumState,
        basis: MeasurementBasis | str = MeasurementBasis.FULL_Z,
        readout_fidelity: float = 1.0,
    ) -> OutcomeDistribution:
        """Probabilities and derivative at phi = 0 in one pass."""
        distribution = MeasurementService.outcome_distribution(state, basis, readout_fidelity)
        derivative = MeasurementService.distribution_derivative(state, basis, readout_fidelity)
        return OutcomeDistribution(
            probabilities=distribution.probabilities,
            derivative=derivative,
            basis=basis,
        )
