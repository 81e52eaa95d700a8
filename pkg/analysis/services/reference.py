"""
Reference State Service - baseline states for comparisons.
"""
import logging
import math
from itertools import combinations
from typing import Optional

import numpy as np

from analysis.dto import ReferenceStateKind
from dipolarvqe.exceptions import InvalidParameterError
from engine.dto import QuantumState

logger = logging.getLogger(__name__)

_SINGLE = {
    '+x': np.array([1.0, 1.0], dtype=complex) / math.sqrt(2),
    '-x': np.array([1.0, -1.0], dtype=complex) / math.sqrt(2),
    '+y': np.array([1.0, 1j], dtype=complex) / math.sqrt(2),
    '-y': np.array([1.0, -1j], dtype=complex) / math.sqrt(2),
    '+z': np.array([1.0, 0.0], dtype=complex),
    '-z': np.array([0.0, 1.0], dtype=complex),
}

DEFAULT_PHASE = {
    ReferenceStateKind.GHZ_X: 0.0,
    ReferenceStateKind.GHZ_Y: math.pi / 2,
    ReferenceStateKind.GHZ_Z: 0.0,
}


def product(single: np.ndarray, n: int) -> np.ndarray:
    vector = np.array([1.0 + 0j])
    for _ in range(n):
        vector = np.kron(vector, single)
    return vector


class ReferenceStateService:
    """Service for exact constructions of CSS, GHZ and Dicke states."""

    @staticmethod
    def reference_state(
        kind: ReferenceStateKind | str,
        n: int,
        phase: Optional[float] = None,
        excitations: Optional[int] = None,
    ) -> QuantumState:
        """
        Build a pure reference state.

        Args:
            kind: css, ghz-x, ghz-y, ghz-z or dicke
            n: Number of spins
            phase: Relative phase chi of a GHZ state,
                (|up...> + e^{i chi}|down...>)/sqrt(2) along its axis.
                Defaults to 0 for ghz-x and ghz-z and to pi/2 for ghz-y,
                where the y-axis cat reaches CFI = N^2 under the J_y signal.
            excitations: Number of down spins of a Dicke state (default N//2)

        Returns:
            QuantumState: Normalized pure state

        Raises:
            InvalidParameterError: n < 1 or excitations out of range
        """
        kind = ReferenceStateKind(kind)
        if n < 1:
            raise InvalidParameterError('n', f'must be at least 1, got {n}')

        if kind == ReferenceStateKind.CSS:
            return QuantumState.pure(product(_SINGLE['+x'], n))

        if kind == ReferenceStateKind.DICKE:
            return ReferenceStateService.dicke(n, n // 2 if excitations is None else excitations)

        axis = kind.value[-1]
        chi = DEFAULT_PHASE[kind] if phase is None else phase
        up = product(_SINGLE[f'+{axis}'], n)
        down = product(_SINGLE[f'-{axis}'], n)
        return QuantumState.pure((up + np.exp(1j * chi) * down) / math.sqrt(2))

    @staticmethod
    def dicke(n: int, excitations: int) -> QuantumState:
        """Equal superposition of all basis states with `excitations` down spins."""
        if not 0 <= excitations <= n:
            raise InvalidParameterError('excitations', f'must lie in [0, {n}], got {excitations}')
        vector = np.zeros(1 << n, dtype=complex)
        for downs in combinations(range(n), excitations):
            vector[sum(1 << (n - 1 - i) for i in downs)] = 1.0
        return QuantumState.pure(vector / math.sqrt(math.comb(n, excitations)))
