"""
Fidelity Service - state overlap and the interaction-cutoff study.
"""
import logging

import numpy as np
from scipy.linalg import sqrtm

from dipolarvqe.exceptions import DimensionMismatchError
from engine.dto import CircuitParams, QuantumState
from engine.services import EntanglerService, GateService
from ensemble.dto import SpinConfiguration
from ensemble.services import CouplingService, HamiltonianService

logger = logging.getLogger(__name__)


class FidelityService:
    """Service for comparing states."""

    @staticmethod
    def state_fidelity(a: QuantumState, b: QuantumState) -> float:
        """
        Uhlmann fidelity (Tr sqrt(sqrt(a) b sqrt(a)))^2, |<a|b>|^2 for pure states.

        Raises:
            DimensionMismatchError: States live on different spaces
        """
        if a.dimension != b.dimension:
            raise DimensionMismatchError(a.dimension, b.dimension)

        if a.is_pure and b.is_pure:
            value = abs(np.vdot(a.data, b.data)) ** 2
        elif a.is_pure or b.is_pure:
            vector, rho = (a.data, b.data) if a.is_pure else (b.data, a.data)
            value = np.real(np.vdot(vector, rho @ vector))
        else:
            root = sqrtm(a.data)
            value = np.real(np.trace(sqrtm(root @ b.data @ root))) ** 2
        return float(np.clip(value, 0.0, 1.0))


class CutoffService:
    """Service for the robustness of prepared states to weak couplings."""

    @staticmethod
    def cutoff_fidelity(config: SpinConfiguration, theta, f_cutoff_hz: float) -> float:
        """
        Fidelity between the entangler output and its output with weak couplings removed.

        Args:
            config: Configuration the parameters were optimized on
            theta: Parameter vector (tau_1, angle_1, tau'_1, ...)
            f_cutoff_hz: Couplings with |V|/2pi below this are set to zero

        Returns:
            float: F in [0, 1]
        """
        coupling, hamiltonian = HamiltonianService.for_configuration(config)
        f_dd = CouplingService.mean_nn_coupling(coupling, config)
        params = CircuitParams.from_vector(theta, 1.0 / f_dd)
        initial = GateService.initial_state(config.n_spins)

        reference = EntanglerService.apply_entangler(params, hamiltonian, initial)
        truncated_coupling = coupling.with_cutoff(f_cutoff_hz)
        truncated = HamiltonianService.build_hamiltonian(
            truncated_coupling, config.model, config.coupling_constants
        )
        output = EntanglerService.apply_entangler(params, truncated, initial)

        dropped = int(np.count_nonzero(coupling.v) - np.count_nonzero(truncated_coupling.v)) // 2
        fidelity = FidelityService.state_fidelity(reference, output)
        logger.debug(f'Cutoff {f_cutoff_hz:.4g} Hz dropped {dropped} pairs: F={fidelity:.6f}')
        return fidelity

    @staticmethod
    def cutoff_sweep(config: SpinConfiguration, theta, cutoffs) -> list[tuple[float, float]]:
        """(f_cutoff, F) for each cutoff."""
        return [(float(f), CutoffService.cutoff_fidelity(config, theta, f)) for f in cutoffs]
