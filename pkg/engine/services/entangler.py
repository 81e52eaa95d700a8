"""
Entangler Service - the m-layer variational circuit.

One layer is R_y(pi/2) D(tau') R_y(-pi/2) R_x(angle) D(tau), and layers
act in order U_m ... U_2 U_1.
"""
import logging
import math
from collections import OrderedDict
from dataclasses import dataclass
from typing import Optional

import numpy as np

from dipolarvqe.exceptions import DimensionMismatchError
from engine.dto import CircuitParams, PrepNoiseSpec, QuantumState
from engine.services.gates import GateService
from engine.services.master_equation import MasterEquationService
from ensemble.dto import Hamiltonian
from ensemble.operators import SpinOperators

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class _PureKernel:
    """Basis changes that turn one layer into three diagonal phases."""

    energies: np.ndarray
    x_values: np.ndarray
    to_z_frame: np.ndarray      # W_z^dagger
    z_to_x_spin: np.ndarray     # H_x^dagger W_z
    x_spin_to_x: np.ndarray     # W_x^dagger H_x
    x_to_z: np.ndarray          # W_z^dagger W_x
    from_x_frame: np.ndarray    # W_x


_KERNELS: 'OrderedDict[int, tuple[Hamiltonian, _PureKernel]]' = OrderedDict()
_KERNEL_CACHE_SIZE = 8


def _kernel(hamiltonian: Hamiltonian) -> _PureKernel:
    # Hamiltonians hold arrays and are not hashable; key on identity.
    entry = _KERNELS.get(id(hamiltonian))
    if entry is not None and entry[0] is hamiltonian:
        _KERNELS.move_to_end(id(hamiltonian))
        return entry[1]

    kernel = _build_kernel(hamiltonian)
    _KERNELS[id(hamiltonian)] = (hamiltonian, kernel)
    if len(_KERNELS) > _KERNEL_CACHE_SIZE:
        _KERNELS.popitem(last=False)
    return kernel


def _build_kernel(hamiltonian: Hamiltonian) -> _PureKernel:
    n = hamiltonian.n_spins
    w_z = hamiltonian.eigenvectors
    x_values, h_x = SpinOperators.collective_eig('x', n)
    w_x = _rotation_matrix('y', math.pi / 2, n) @ w_z
    return _PureKernel(
        energies=hamiltonian.eigenvalues,
        x_values=x_values,
        to_z_frame=w_z.conj().T,
        z_to_x_spin=h_x.conj().T @ w_z,
        x_spin_to_x=w_x.conj().T @ h_x,
        x_to_z=w_z.conj().T @ w_x,
        from_x_frame=w_x,
    )


def _rotation_matrix(axis: str, angle: float, n: int) -> np.ndarray:
    single = SpinOperators.single_qubit_rotation(axis, angle)
    u = np.array([[1.0 + 0j]])
    for _ in range(n):
        u = np.kron(u, single)
    return u


class EntanglerService:
    """Service for applying the variational entangler S(theta)."""

    @staticmethod
    def apply_entangler(
        params: CircuitParams,
        hamiltonian: Hamiltonian,
        state: QuantumState,
        noise: Optional[PrepNoiseSpec] = None,
    ) -> QuantumState:
        """
        Apply S(theta) = U_m ... U_1 to a state.

        Args:
            params: Circuit parameters
            hamiltonian: Interaction Hamiltonian generating D(tau)
            state: Input state, typically the +x CSS
            noise: Optional dephasing during the interaction windows

        Returns:
            QuantumState: Output state (density matrix when the input is one
            or when dephasing is on)

        Raises:
            DimensionMismatchError: H and state act on different spaces
        """
        GateService.check_dimensions(state, hamiltonian)
        gamma_z = noise.dephasing_rate if noise is not None else 0.0

        if state.is_pure and gamma_z == 0.0:
            return QuantumState.pure(EntanglerService.evolve_vector(params, hamiltonian, state.data))

        current = state.as_density()
        for tau, angle, tau_prime in params.layers():
            current = EntanglerService._window(current, hamiltonian, gamma_z, tau)
            current = GateService.global_rotation(current, 'x', angle)
            current = GateService.global_rotation(current, 'y', -math.pi / 2)
            current = EntanglerService._window(current, hamiltonian, gamma_z, tau_prime)
            current = GateService.global_rotation(current, 'y', math.pi / 2)
        return current

    @staticmethod
    def _window(
        state: QuantumState,
        hamiltonian: Hamiltonian,
        gamma_z: float,
        tau: float,
    ) -> QuantumState:
        if tau == 0.0:
            return state
        if gamma_z == 0.0:
            return GateService.interaction_evolution(state, hamiltonian, tau)
        return MasterEquationService.lindblad_dephasing_propagate(state, hamiltonian, gamma_z, tau)

    @staticmethod
    def evolve_vector(
        params: CircuitParams,
        hamiltonian: Hamiltonian,
        vector: np.ndarray,
    ) -> np.ndarray:
        """
        Noiseless pure-state path.

        Works in the eigenbases of H, J_x and of the rotated Hamiltonian so
        that each layer costs three matrix-vector products.
        """
        if vector.shape[0] != hamiltonian.dimension:
            raise DimensionMismatchError(hamiltonian.dimension, vector.shape[0])
        if params.m == 0:
            return np.array(vector, dtype=complex)

        kernel = _kernel(hamiltonian)
        amplitudes = kernel.to_z_frame @ vector
        for i, (tau, angle, tau_prime) in enumerate(params.layers()):
            if i > 0:
                amplitudes = kernel.x_to_z @ amplitudes
            amplitudes = amplitudes * np.exp(-1j * tau * kernel.energies)
            amplitudes = kernel.z_to_x_spin @ amplitudes
            amplitudes = amplitudes * np.exp(-1j * angle * kernel.x_values)
            amplitudes = kernel.x_spin_to_x @ amplitudes
            amplitudes = amplitudes * np.exp(-1j * tau_prime * kernel.energies)
        return kernel.from_x_frame @ amplitudes
