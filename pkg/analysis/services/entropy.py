"""
Entropy Service - reduced states and von Neumann entropies.
"""
import logging
from typing import Iterable

import numpy as np
from django.conf import settings
from scipy.stats import entropy

from dipolarvqe.exceptions import InvalidSubsetError
from engine.dto import QuantumState

logger = logging.getLogger(__name__)


class EntropyService:
    """Service for bipartite entanglement measures."""

    @staticmethod
    def check_subset(subset: Iterable[int], n: int) -> tuple[int, ...]:
        """
        Normalize a spin subset to sorted unique indices.

        Raises:
            InvalidSubsetError: Empty, full or out-of-range subset
        """
        indices = tuple(sorted(set(int(i) for i in subset)))
        if not indices:
            raise InvalidSubsetError('subset is empty')
        if indices[0] < 0 or indices[-1] >= n:
            raise InvalidSubsetError(f'subset {indices} is outside spins 0..{n - 1}')
        if len(indices) == n:
            raise InvalidSubsetError('subset covers every spin')
        return indices

    @staticmethod
    def reduced_density(state: QuantumState, subset: Iterable[int]) -> np.ndarray:
        """
        Partial trace over the complement of a subset.

        Args:
            state: Pure or mixed N-spin state
            subset: Spins to keep

        Returns:
            np.ndarray: 2^k x 2^k reduced density matrix, spins in subset order
        """
        n = state.n_spins
        keep = EntropyService.check_subset(subset, n)
        rest = tuple(i for i in range(n) if i not in keep)
        d_keep, d_rest = 1 << len(keep), 1 << len(rest)

        if state.is_pure:
            amplitudes = state.data.reshape((2,) * n).transpose(keep + rest).reshape(d_keep, d_rest)
            return amplitudes @ amplitudes.conj().T

        order = keep + rest + tuple(n + i for i in keep + rest)
        rho = state.data.reshape((2,) * (2 * n)).transpose(order)
        rho = rho.reshape(d_keep, d_rest, d_keep, d_rest)
        return np.einsum('ajbj->ab', rho)

    @staticmethod
    def entropy_of(rho: np.ndarray) -> float:
        """Base-2 von Neumann entropy of a density matrix."""
        floor = settings.SIMULATION['ENTROPY_EIGENVALUE_FLOOR']
        eigenvalues = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))
        eigenvalues = eigenvalues[eigenvalues > floor]
        if eigenvalues.size <= 1:
            return 0.0
        return float(max(entropy(eigenvalues, base=2), 0.0))

    @staticmethod
    def von_neumann_entropy(state: QuantumState, subset: Iterable[int]) -> float:
        """
        Entanglement entropy -Tr(rho_s log2 rho_s) of a spin subset.

        Args:
            state: Pure or mixed N-spin state
            subset: Nonempty proper subset of spin indices

        Returns:
            float: Entropy in bits

        Raises:
            InvalidSubsetError: Empty, full or out-of-range subset
        """
        return EntropyService.entropy_of(EntropyService.reduced_density(state, subset))

    @staticmethod
    def single_spin_entropies(state: QuantumState) -> list[float]:
        """Entropy of every spin against the rest (zeros for a single spin)."""
        if state.n_spins < 2:
            return [0.0] * state.n_spins
        return [EntropyService.von_neumann_entropy(state, (i,)) for i in range(state.n_spins)]
