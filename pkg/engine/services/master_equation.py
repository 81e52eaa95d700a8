"""
Master Equation Service - dephasing during preparation and Ramsey windows.

Both generators are integrated on the vectorized density matrix with an
adaptive explicit Runge-Kutta (4)5 scheme. Per-spin sigma_z dephasing acts
elementwise: sum_i (sigma_z^i rho sigma_z^i - rho) = -2 d(a, b) rho_ab with
d the Hamming distance between basis states a and b.
"""
import logging
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
from django.conf import settings
from scipy.integrate import solve_ivp

from dipolarvqe.exceptions import IntegrationError, InvalidParameterError, NotADensityMatrixError
from engine.dto import QuantumState
from engine.services.gates import GateService
from ensemble.dto import Hamiltonian
from ensemble.operators import SpinOperators

logger = logging.getLogger(__name__)


@lru_cache(maxsize=16)
def hamming_distances(n: int) -> np.ndarray:
    bits = SpinOperators.basis_bits(n)
    distances = (bits[:, None, :] != bits[None, :, :]).sum(axis=-1).astype(float)
    distances.setflags(write=False)
    return distances


@lru_cache(maxsize=16)
def magnetization_gaps(n: int) -> np.ndarray:
    """m_a - m_b for J_z eigenvalues m of the basis states."""
    m = SpinOperators.spin_z_values(n).sum(axis=1)
    gaps = m[:, None] - m[None, :]
    gaps.setflags(write=False)
    return gaps


class MasterEquationService:
    """Service for open-system propagation of density matrices."""

    @staticmethod
    def dephasing_rate(t: float, t2: float, stretch: float) -> float:
        """gamma_z(t) = (nu/2) t^(nu-1) / T2^nu."""
        if stretch == 1.0:
            return 0.5 / t2
        return 0.5 * stretch * t ** (stretch - 1.0) / t2 ** stretch

    @staticmethod
    def _integrate(
        rhs: Callable[[float, np.ndarray], np.ndarray],
        rho: np.ndarray,
        times: Sequence[float],
    ) -> list[np.ndarray]:
        """
        Integrate a vectorized generator and return rho at each output time.

        Raises:
            IntegrationError: Solver failure (at the last time it reached),
                non-finite output, or trace drift beyond TRACE_TOLERANCE
        """
        sim = settings.SIMULATION
        dim = rho.shape[0]
        t_final = float(times[-1])
        if t_final == 0.0:
            return [rho.copy() for _ in times]

        reached = [0.0]

        def tracked(t, y):
            reached[0] = max(reached[0], t)
            return rhs(t, y)

        result = solve_ivp(
            tracked,
            (0.0, t_final),
            rho.reshape(-1).astype(complex),
            method='RK45',
            t_eval=np.asarray(times, dtype=float),
            rtol=sim['ODE_RTOL'],
            atol=sim['ODE_ATOL'],
        )
        if not result.success:
            logger.error(f'Master-equation integration failed near t={reached[0]:.6g} s: {result.message}')
            raise IntegrationError(reached[0], result.message)

        states = []
        for t, column in zip(result.t, result.y.T):
            matrix = column.reshape(dim, dim)
            if not np.all(np.isfinite(matrix)):
                raise IntegrationError(float(t), 'density matrix became non-finite')
            drift = abs(np.trace(matrix).real - 1.0)
            if drift > sim['TRACE_TOLERANCE']:
                logger.error(f'Trace drifted by {drift:.3g} at t={t:.6g} s')
                raise IntegrationError(float(t), f'trace drifted by {drift:.3g}')
            states.append(0.5 * (matrix + matrix.conj().T))
        return states

    @staticmethod
    def _as_density(state: QuantumState) -> QuantumState:
        if state.is_pure:
            return state.as_density()
        return state

    @staticmethod
    def _wrap(matrix: np.ndarray) -> QuantumState:
        return QuantumState.density(matrix, positivity_tolerance=1e-7)

    @staticmethod
    def lindblad_dephasing_propagate(
        rho: QuantumState,
        hamiltonian: Hamiltonian,
        gamma_z: float,
        duration: float,
    ) -> QuantumState:
        """
        Integrate d rho/dt = -i[H, rho] + gamma_z sum_i (sigma_z^i rho sigma_z^i - rho).

        With gamma_z = 1/(2 T2) a lone spin's coherence decays as exp(-t/T2).

        Args:
            rho: Density-matrix state
            hamiltonian: Interaction Hamiltonian (rad/s)
            gamma_z: Dephasing rate per spin (1/s)
            duration: Evolution time (s)

        Returns:
            QuantumState: Propagated density matrix

        Raises:
            NotADensityMatrixError: Pure input
            InvalidParameterError: Negative rate or duration
        """
        if rho.is_pure:
            raise NotADensityMatrixError()
        if gamma_z < 0:
            raise InvalidParameterError('gamma_z', f'must be non-negative, got {gamma_z}')
        if duration < 0:
            raise InvalidParameterError('duration', f'must be non-negative, got {duration}')
        GateService.check_dimensions(rho, hamiltonian)

        dim = rho.dimension
        h = hamiltonian.matrix
        damping = 2.0 * gamma_z * hamming_distances(rho.n_spins)

        def rhs(_t, y):
            r = y.reshape(dim, dim)
            return (-1j * (h @ r - r @ h) - damping * r).reshape(-1)

        final = MasterEquationService._integrate(rhs, rho.data, [duration])[-1]
        return MasterEquationService._wrap(final)

    @staticmethod
    def nonmarkovian_trajectory(
        state: QuantumState,
        omega: float,
        t2: float,
        stretch: float,
        times: Sequence[float],
    ) -> list[QuantumState]:
        """
        Propagate under the time-local single-spin generator on every spin.

        Each spin sees the signal -(i/2) omega [sigma_z, rho] and dephasing
        at rate gamma_z(t), so its coherence envelope is exp(-(t/T2)^nu).

        Args:
            state: Pure or density state (pure input is converted)
            omega: Signal in rad/s
            t2: Coherence time (s)
            stretch: nu >= 1
            times: Ascending output times (s)

        Returns:
            list[QuantumState]: One density matrix per output time
        """
        if t2 <= 0:
            raise InvalidParameterError('T2', f'must be positive, got {t2}')
        if stretch < 1:
            raise InvalidParameterError('nu', f'must be at least 1, got {stretch}')
        times = [float(t) for t in times]
        if not times or times[0] < 0 or any(b < a for a, b in zip(times, times[1:])):
            raise InvalidParameterError('t', 'times must be non-negative and ascending')

        rho = MasterEquationService._as_density(state)
        phase = (-1j * omega * magnetization_gaps(rho.n_spins)).reshape(-1)
        hamming = hamming_distances(rho.n_spins).reshape(-1)

        def rhs(t, y):
            rate = MasterEquationService.dephasing_rate(t, t2, stretch)
            return (phase - 2.0 * rate * hamming) * y

        matrices = MasterEquationService._integrate(rhs, rho.data, times)
        return [MasterEquationService._wrap(matrix) for matrix in matrices]

    @staticmethod
    def nonmarkovian_propagate(
        state: QuantumState,
        omega: float,
        t2: float,
        stretch: float,
        t: float,
    ) -> QuantumState:
        """Single-time form of nonmarkovian_trajectory."""
        if t < 0:
            raise InvalidParameterError('t', f'must be non-negative, got {t}')
        return MasterEquationService.nonmarkovian_trajectory(state, omega, t2, stretch, [t])[0]
