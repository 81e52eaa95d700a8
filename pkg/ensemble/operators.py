"""
Spin-1/2 operators on the N-spin computational basis.

Spin 0 is the most significant bit of a basis index; bit value 0 is
spin up along z (S^z = +1/2).
"""
from functools import lru_cache

import numpy as np

PAULI = {
    'i': np.eye(2, dtype=complex),
    'x': np.array([[0, 1], [1, 0]], dtype=complex),
    'y': np.array([[0, -1j], [1j, 0]], dtype=complex),
    'z': np.array([[1, 0], [0, -1]], dtype=complex),
}


class SpinOperators:
    """Cached builders for single-spin and collective operators."""

    @staticmethod
    def dimension(n: int) -> int:
        return 1 << n

    @staticmethod
    @lru_cache(maxsize=32)
    def basis_bits(n: int) -> np.ndarray:
        """
        Bit table of the computational basis.

        Returns:
            np.ndarray: (2^N, N) array of 0/1 where column i is spin i
        """
        states = np.arange(1 << n)
        shifts = np.arange(n - 1, -1, -1)
        bits = (states[:, None] >> shifts[None, :]) & 1
        bits.setflags(write=False)
        return bits

    @staticmethod
    @lru_cache(maxsize=32)
    def spin_z_values(n: int) -> np.ndarray:
        """Diagonal of S^z_i for every spin: (2^N, N) array of +-1/2."""
        values = 0.5 - SpinOperators.basis_bits(n)
        values.setflags(write=False)
        return values

    @staticmethod
    def single(axis: str, site: int, n: int) -> np.ndarray:
        """Spin operator S^axis acting on one spin, as a dense 2^N matrix."""
        op = np.array([[1.0]], dtype=complex)
        for k in range(n):
            factor = PAULI[axis] / 2 if k == site else PAULI['i']
            op = np.kron(op, factor)
        return op

    @staticmethod
    @lru_cache(maxsize=64)
    def collective(axis: str, n: int) -> np.ndarray:
        """J^axis = sum_i S^axis_i."""
        op = sum(SpinOperators.single(axis, i, n) for i in range(n))
        op.setflags(write=False)
        return op

    @staticmethod
    @lru_cache(maxsize=64)
    def collective_eig(axis: str, n: int) -> tuple[np.ndarray, np.ndarray]:
        """
        Eigendecomposition of J^axis built from the single-spin one.

        Returns:
            tuple: (eigenvalues, eigenvectors) with J = W diag(m) W^dagger
        """
        single_values, single_vectors = np.linalg.eigh(PAULI[axis] / 2)
        values = np.zeros(1)
        vectors = np.array([[1.0 + 0j]])
        for _ in range(n):
            values = np.add.outer(values, single_values).ravel()
            vectors = np.kron(vectors, single_vectors)
        values.setflags(write=False)
        vectors.setflags(write=False)
        return values, vectors

    @staticmethod
    def single_qubit_rotation(axis: str, angle: float) -> np.ndarray:
        """exp(-i angle sigma/2) for one spin."""
        return (
            np.cos(angle / 2) * PAULI['i']
            - 1j * np.sin(angle / 2) * PAULI[axis]
        )
