"""
Wigner Service - spherical Wigner function on the collective spin sphere.

The state is first projected onto the permutation-symmetric subspace
(total spin j = N/2). With T_kq the irreducible tensor operators of spin j,

    W(theta, phi) = sqrt((2j+1)/4pi) sum_{k,q} Tr(rho T_kq^dagger) Y_kq(theta, phi),

so that the integral of W over the sphere equals Tr(rho_sym).
"""
import logging
import math
from functools import lru_cache
from typing import Optional

import numpy as np
from django.conf import settings
from scipy.special import sph_harm_y
from sympy import Rational
from sympy.physics.quantum.cg import CG

from analysis.dto import WignerGrid
from analysis.services.reference import ReferenceStateService
from dipolarvqe.exceptions import InvalidParameterError
from engine.dto import QuantumState

logger = logging.getLogger(__name__)


@lru_cache(maxsize=16)
def symmetric_basis(n: int) -> np.ndarray:
    """Dicke states |j, j - k> as columns, k = 0..N down spins."""
    columns = [ReferenceStateService.dicke(n, k).data for k in range(n + 1)]
    basis = np.column_stack(columns)
    basis.setflags(write=False)
    return basis


@lru_cache(maxsize=16)
def multipole_operators(n: int) -> dict[tuple[int, int], np.ndarray]:
    """
    T_kq for spin j = N/2 on the (N+1)-dimensional Dicke basis.

    Row/column i holds m = j - i.
    """
    j = Rational(n, 2)
    dim = n + 1
    operators = {}
    for k in range(n + 1):
        norm = math.sqrt((2 * k + 1) / (n + 1))
        for q in range(-k, k + 1):
            t = np.zeros((dim, dim))
            for col in range(dim):
                m_prime = j - col
                m = m_prime + q
                if abs(m) > j:
                    continue
                row = int(j - m)
                t[row, col] = norm * float(CG(j, m_prime, k, q, j, m).doit())
            t.setflags(write=False)
            operators[(k, q)] = t
    return operators


class WignerService:
    """Service for collective-spin phase-space distributions."""

    @staticmethod
    def symmetric_projection(state: QuantumState) -> np.ndarray:
        """rho_sym = P rho P expressed in the Dicke basis, (N+1) x (N+1)."""
        basis = symmetric_basis(state.n_spins)
        if state.is_pure:
            amplitudes = basis.conj().T @ state.data
            return np.outer(amplitudes, amplitudes.conj())
        return basis.conj().T @ state.data @ basis

    @staticmethod
    def grid(resolution: Optional[tuple[int, int]] = None) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Gauss-Legendre polar nodes (with weights in cos theta) and a uniform azimuthal grid."""
        n_theta, n_phi = resolution or settings.SIMULATION['WIGNER_RESOLUTION']
        if n_theta < 1 or n_phi < 1:
            raise InvalidParameterError('resolution', f'must be positive, got {(n_theta, n_phi)}')
        nodes, weights = np.polynomial.legendre.leggauss(n_theta)
        # north pole first
        theta = np.arccos(nodes[::-1])
        phi = np.linspace(0.0, 2 * np.pi, n_phi, endpoint=False)
        return theta, phi, weights[::-1]

    @staticmethod
    def wigner_distribution(
        state: QuantumState,
        resolution: Optional[tuple[int, int]] = None,
    ) -> WignerGrid:
        """
        Sample the spherical Wigner function of the symmetric projection.

        Args:
            state: Pure or mixed N-spin state
            resolution: (polar, azimuthal) point counts, default (64, 128)

        Returns:
            WignerGrid: Real values on the theta x phi grid
        """
        n = state.n_spins
        theta, phi, weights = WignerService.grid(resolution)
        rho_sym = WignerService.symmetric_projection(state)
        symmetric_weight = float(np.real(np.trace(rho_sym)))

        theta_grid, phi_grid = np.meshgrid(theta, phi, indexing='ij')
        values = np.zeros(theta_grid.shape, dtype=complex)
        for (k, q), t in multipole_operators(n).items():
            coefficient = np.trace(rho_sym @ t.T)
            if abs(coefficient) < 1e-15:
                continue
            values += coefficient * sph_harm_y(k, q, theta_grid, phi_grid)
        values *= math.sqrt((n + 1) / (4 * np.pi))

        if symmetric_weight < 1 - 1e-9:
            logger.info(f'Symmetric subspace holds {symmetric_weight:.4f} of the state')
        return WignerGrid(
            theta=theta,
            phi=phi,
            weights=weights,
            values=np.real(values),
            symmetric_weight=symmetric_weight,
        )
