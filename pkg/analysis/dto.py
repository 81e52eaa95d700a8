"""
Analysis Pydantic schemas (DTO).
"""
from enum import Enum

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator


class ReferenceStateKind(str, Enum):
    CSS = 'css'
    GHZ_X = 'ghz-x'
    GHZ_Y = 'ghz-y'
    GHZ_Z = 'ghz-z'
    DICKE = 'dicke'


class ClusterPartition(BaseModel):
    """Disjoint spin clusters with the entropy of each cluster against the rest."""

    model_config = ConfigDict(frozen=True)

    blocks: tuple[tuple[int, ...], ...]
    entropies: tuple[float, ...]
    threshold: float = Field(gt=0)

    @model_validator(mode='after')
    def check_invariants(self) -> 'ClusterPartition':
        if len(self.blocks) != len(self.entropies):
            raise ValueError('one entropy per block is required')
        members = sorted(i for block in self.blocks for i in block)
        if members != list(range(len(members))):
            raise ValueError('blocks must partition the spins 0..N-1')
        return self

    @property
    def sizes(self) -> list[int]:
        return [len(block) for block in self.blocks]

    @property
    def max_size(self) -> int:
        return max(self.sizes)


class WignerGrid(BaseModel):
    """Spherical Wigner function sampled on a Gauss-Legendre x uniform grid."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    theta: np.ndarray           # polar angles, Gauss-Legendre nodes in cos(theta)
    phi: np.ndarray             # azimuthal angles in [0, 2pi)
    weights: np.ndarray         # quadrature weights in cos(theta)
    values: np.ndarray          # (len(theta), len(phi)), real
    projection: str = 'symmetric-subspace'
    symmetric_weight: float     # Tr(rho_sym)

    @model_validator(mode='after')
    def check_invariants(self) -> 'WignerGrid':
        if self.values.shape != (self.theta.shape[0], self.phi.shape[0]):
            raise ValueError('values must be sampled on the theta x phi grid')
        if not np.isrealobj(self.values):
            raise ValueError('Wigner values must be real')
        return self

    def integral(self) -> float:
        """Quadrature of W over the unit sphere."""
        d_phi = 2 * np.pi / self.phi.shape[0]
        return float(self.weights @ self.values.sum(axis=1) * d_phi)

    def rows(self) -> list[dict]:
        return [
            {'theta': float(t), 'phi': float(p), 'w': float(self.values[i, j])}
            for i, t in enumerate(self.theta)
            for j, p in enumerate(self.phi)
        ]


class SqueezingReport(BaseModel):
    xi_squared: float
    mean_jx: float
    variance_jy: float
    cfi_bound: float


class PreparationTime(BaseModel):
    """Entangler duration T = sum(tau + tau') in seconds and in units of 1/f_dd."""

    seconds: float
    fdd_t: float
    f_dd_hz: float
