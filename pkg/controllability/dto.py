"""
Controllability Pydantic schemas (DTO).
"""
from enum import Enum

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator


class ControlSystem(str, Enum):
    DIPOLAR = 'dipolar'                     # dipolar drift, global J_x and J_y
    SYMMETRIC_ISING = 'symmetric-ising'     # all-to-all Sz.Sz drift, global J_x and J_y
    GLOBAL_ONLY = 'global-only'             # J_x and J_y without drift


class LieClosure(BaseModel):
    """
    Orthonormal basis of a dynamical Lie algebra.

    Row r of `basis` holds the real Pauli-string coefficients of a Hermitian
    H_r; the algebra element is -iH_r. The identity direction is excluded.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    n_spins: int
    basis: np.ndarray
    rounds: int
    exhausted: bool = False     # round budget hit; dimension is a lower bound

    @model_validator(mode='after')
    def check_invariants(self) -> 'LieClosure':
        if self.basis.ndim != 2 or self.basis.shape[1] != 4 ** self.n_spins:
            raise ValueError(f'basis rows must have {4 ** self.n_spins} Pauli coefficients')
        if not np.isrealobj(self.basis):
            raise ValueError('Pauli coefficients must be real')
        self.basis.setflags(write=False)
        return self

    @property
    def dimension(self) -> int:
        return self.basis.shape[0]

    @property
    def dimension_with_identity(self) -> int:
        """Dimension counted in u(2^N), identity direction included."""
        return self.dimension + 1


class ControllabilityReport(BaseModel):
    n_spins: int
    system: ControlSystem
    dimension: int
    dimension_with_identity: int
    lower_bound: int            # C(N+3, N) - 1, compared with dimension_with_identity
    upper_bound: int            # 4^N - 1, su(2^N)
    exhausted: bool
    verdict: str

    def to_document(self) -> dict:
        document = self.model_dump(mode='json')
        document['dimension_label'] = f'>={self.dimension}' if self.exhausted else str(self.dimension)
        return document
