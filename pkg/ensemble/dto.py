"""
Ensemble Pydantic schemas (DTO).
"""
from enum import Enum
from typing import Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from dipolarvqe.exceptions import CoincidentSpinsError


class InteractionModel(str, Enum):
    DIPOLAR = 'dipolar-spin-half'
    NV_EFFECTIVE = 'nv-effective'
    ISING = 'ising'
    COLD_MOLECULE = 'cold-molecule'
    GENERIC = 'generic'


# (J^I, J^S) of H = sum_{i<j} V_ij (J^I Sz_i Sz_j + J^S S_i.S_j)
MODEL_CONSTANTS = {
    InteractionModel.DIPOLAR: (3.0, -1.0),
    InteractionModel.NV_EFFECTIVE: (2.0, -1.0),
    InteractionModel.ISING: (2.0, 0.0),
    InteractionModel.COLD_MOLECULE: (1.0, -1.0),
}


class ConfigurationKind(str, Enum):
    CHAIN = 'chain'
    SQUARE_LATTICE = 'square-lattice'
    CIRCLE = 'circle'
    RANDOM_3D = 'random-3d'


class SpinConfiguration(BaseModel):
    """Spin positions (nm), gyromagnetic ratios (rad/s/T) and quantization axis."""

    model_config = ConfigDict(frozen=True)

    positions: tuple[tuple[float, float, float], ...]
    gamma: tuple[float, ...]
    field_axis: tuple[float, float, float] = (0.0, 0.0, 1.0)
    model: InteractionModel = InteractionModel.DIPOLAR
    coupling_constants: Optional[tuple[float, float]] = None
    angular_factor: Optional[Literal['cos2', 'cos1']] = None
    label: str = ''
    seed: Optional[int] = Field(default=None, ge=0, lt=2**64)

    @model_validator(mode='after')
    def check_invariants(self) -> 'SpinConfiguration':
        n = len(self.positions)
        if n < 1:
            raise ValueError('configuration needs at least one spin')
        if len(self.gamma) != n:
            raise ValueError(f'expected {n} gyromagnetic ratios, got {len(self.gamma)}')
        if abs(np.linalg.norm(self.field_axis) - 1.0) > 1e-12:
            raise ValueError('field_axis must be a unit vector')
        if self.model == InteractionModel.GENERIC and self.coupling_constants is None:
            raise ValueError('generic model needs coupling_constants (J^I, J^S)')

        points = np.asarray(self.positions, dtype=float)
        for i in range(n):
            for j in range(i + 1, n):
                if np.linalg.norm(points[i] - points[j]) == 0.0:
                    raise CoincidentSpinsError(i, j)
        return self

    @property
    def n_spins(self) -> int:
        return len(self.positions)

    @property
    def positions_array(self) -> np.ndarray:
        return np.asarray(self.positions, dtype=float)

    @property
    def constants(self) -> tuple[float, float]:
        """(J^I, J^S) for this configuration's model."""
        if self.coupling_constants is not None:
            return self.coupling_constants
        return MODEL_CONSTANTS[self.model]

    def distances(self) -> np.ndarray:
        points = self.positions_array
        return np.linalg.norm(points[:, None, :] - points[None, :, :], axis=-1)

    def to_document(self) -> dict:
        """JSON document with explicit unit annotations."""
        document = self.model_dump(mode='json')
        document['units'] = {
            'positions': 'nm',
            'gamma': 'rad s^-1 T^-1',
            'field_axis': 'dimensionless',
        }
        return document

    @classmethod
    def from_document(cls, document: dict) -> 'SpinConfiguration':
        payload = {key: value for key, value in document.items() if key != 'units'}
        return cls.model_validate(payload)


class CouplingMatrix(BaseModel):
    """Pairwise couplings V_ij in rad/s; symmetric with zero diagonal."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    v: np.ndarray

    @model_validator(mode='after')
    def check_invariants(self) -> 'CouplingMatrix':
        v = np.asarray(self.v, dtype=float)
        if v.ndim != 2 or v.shape[0] != v.shape[1]:
            raise ValueError('coupling matrix must be square')
        if not np.array_equal(v, v.T):
            raise ValueError('coupling matrix must be symmetric')
        if np.any(np.diag(v) != 0.0):
            raise ValueError('coupling matrix diagonal must be zero')
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, 'v', v)
        return self

    @property
    def n_spins(self) -> int:
        return self.v.shape[0]

    def scaled(self, factor: float) -> 'CouplingMatrix':
        return CouplingMatrix(v=self.v * factor)

    def with_cutoff(self, f_cutoff_hz: float) -> 'CouplingMatrix':
        """Zero every coupling with |V|/2pi below f_cutoff_hz."""
        v = np.where(np.abs(self.v) / (2 * np.pi) < f_cutoff_hz, 0.0, self.v)
        return CouplingMatrix(v=v)


class Hamiltonian(BaseModel):
    """Dense Hermitian matrix (rad/s) with its eigendecomposition."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    matrix: np.ndarray
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    model: InteractionModel
    n_spins: int

    @model_validator(mode='after')
    def check_invariants(self) -> 'Hamiltonian':
        h = self.matrix
        dim = 1 << self.n_spins
        if h.shape != (dim, dim):
            raise ValueError(f'expected a {dim}x{dim} matrix, got {h.shape}')
        scale = np.max(np.abs(h)) if h.size else 0.0
        if np.max(np.abs(h - h.conj().T)) > 1e-12 * max(scale, 1e-300):
            raise ValueError('Hamiltonian is not Hermitian')
        # Reconstruction is cubic in the dimension; beyond 10 spins trust eigh.
        if self.n_spins <= 10 and scale > 0:
            w = self.eigenvectors
            rebuilt = (w * self.eigenvalues) @ w.conj().T
            if np.max(np.abs(rebuilt - h)) > 1e-10 * scale:
                raise ValueError('eigendecomposition does not reconstruct H')
        for array in (h, self.eigenvalues, self.eigenvectors):
            array.setflags(write=False)
        return self

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]

    def propagator(self, tau: float) -> np.ndarray:
        """exp(-i tau H) from the cached eigendecomposition."""
        w = self.eigenvectors
        return (w * np.exp(-1j * tau * self.eigenvalues)) @ w.conj().T
