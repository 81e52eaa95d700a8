"""
Gate Service - global rotations, interaction windows and state preparation.
"""
import logging

import numpy as np

from dipolarvqe.exceptions import DimensionMismatchError, InvalidParameterError
from engine.dto import QuantumState
from ensemble.dto import Hamiltonian
from ensemble.operators import PAULI, SpinOperators

logger = logging.getLogger(__name__)

AXES = ('x', 'y', 'z')


def apply_local(data: np.ndarray, u: np.ndarray, n: int) -> np.ndarray:
    """
    Apply the same 2x2 unitary to every spin of a vector or density matrix.

    Densities are conjugated: u on the ket indices, u* on the bra indices.
    """
    if n == 0:
        return data.copy()
    if data.ndim == 1:
        tensor = data.reshape((2,) * n)
        for k in range(n):
            tensor = np.moveaxis(np.tensordot(u, tensor, axes=([1], [k])), 0, k)
        return tensor.reshape(-1)

    tensor = data.reshape((2,) * (2 * n))
    u_conj = u.conj()
    for k in range(n):
        tensor = np.moveaxis(np.tensordot(u, tensor, axes=([1], [k])), 0, k)
        tensor = np.moveaxis(np.tensordot(u_conj, tensor, axes=([1], [n + k])), 0, n + k)
    return tensor.reshape(data.shape)


def apply_collective(data: np.ndarray, axis: str, n: int) -> np.ndarray:
    """
    J^axis psi, or J^axis rho (left action only), without the dense 2^N matrix.
    """
    single = PAULI[axis] / 2
    dim = 1 << n
    tensor = data.reshape((2,) * n + data.shape[1:])
    result = np.zeros_like(tensor, dtype=complex)
    for k in range(n):
        result += np.moveaxis(np.tensordot(single, tensor, axes=([1], [k])), 0, k)
    return result.reshape((dim,) + data.shape[1:])


def apply_unitary(data: np.ndarray, u: np.ndarray) -> np.ndarray:
    """U psi for vectors, U rho U^dagger for densities."""
    if data.ndim == 1:
        return u @ data
    return u @ data @ u.conj().T


class GateService:
    """Service for the elementary operations of the entangler."""

    @staticmethod
    def global_rotation(state: QuantumState, axis: str, angle: float) -> QuantumState:
        """
        Apply R_axis(angle) = exp(-i angle sum_j S^axis_j).

        Args:
            state: Pure or density state
            axis: 'x', 'y' or 'z'
            angle: Rotation angle in radians

        Returns:
            QuantumState: Rotated state of the same representation
        """
        if axis not in AXES:
            raise InvalidParameterError('axis', f'expected one of {AXES}, got {axis!r}')
        u = SpinOperators.single_qubit_rotation(axis, angle)
        return GateService._wrap(apply_local(state.data, u, state.n_spins), state)

    @staticmethod
    def interaction_evolution(state: QuantumState, hamiltonian: Hamiltonian, tau: float) -> QuantumState:
        """
        Apply D(tau) = exp(-i tau H) through the cached eigendecomposition.

        Raises:
            InvalidParameterError: tau < 0
            DimensionMismatchError: H and state act on different spaces
        """
        if tau < 0:
            raise InvalidParameterError('tau', f'must be non-negative, got {tau}')
        GateService.check_dimensions(state, hamiltonian)
        u = hamiltonian.propagator(tau)
        return GateService._wrap(apply_unitary(state.data, u), state)

    @staticmethod
    def ramsey_phase(state: QuantumState, phi: float) -> QuantumState:
        """Signal rotation exp(-i phi J_y)."""
        return GateService.global_rotation(state, 'y', phi)

    @staticmethod
    def initial_state(n: int, init_fidelity: float = 1.0) -> QuantumState:
        """
        Polarized input along +x.

        Args:
            n: Number of spins
            init_fidelity: IF in [-1, 1]; 1 gives the pure coherent spin
                state, below 1 a product of (I + IF sigma_x)/2

        Returns:
            QuantumState: Pure CSS or product density matrix
        """
        if not -1.0 <= init_fidelity <= 1.0:
            raise InvalidParameterError('init_fidelity', f'must lie in [-1, 1], got {init_fidelity}')
        dim = SpinOperators.dimension(n)
        if init_fidelity == 1.0:
            return QuantumState.pure(np.full(dim, 1.0 / np.sqrt(dim), dtype=complex))

        single = (PAULI['i'] + init_fidelity * PAULI['x']) / 2
        rho = np.array([[1.0 + 0j]])
        for _ in range(n):
            rho = np.kron(rho, single)
        return QuantumState.density(rho)

    @staticmethod
    def check_dimensions(state: QuantumState, hamiltonian: Hamiltonian) -> None:
        if hamiltonian.dimension != state.dimension:
            raise DimensionMismatchError(hamiltonian.dimension, state.dimension)

    @staticmethod
    def _wrap(data: np.ndarray, like: QuantumState) -> QuantumState:
        if data.ndim == 1:
            return QuantumState.pure(data)
        # Rotations preserve the spectrum of integrator outputs.
        return QuantumState.density(0.5 * (data + data.conj().T), positivity_tolerance=1e-7)
