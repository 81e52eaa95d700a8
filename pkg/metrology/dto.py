"""
Metrology Pydantic schemas (DTO).
"""
from enum import Enum
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator


class MeasurementBasis(str, Enum):
    FULL_Z = 'full-z'       # 2^N outcomes
    TOTAL_JZ = 'total-jz'   # N+1 outcomes, indexed by the number of down spins
    PARITY = 'parity'       # (even, odd) number of down spins


class OutcomeDistribution(BaseModel):
    """Outcome probabilities and, optionally, their phase derivative at the operating point."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    probabilities: np.ndarray
    derivative: Optional[np.ndarray] = None
    basis: MeasurementBasis

    @model_validator(mode='after')
    def check_invariants(self) -> 'OutcomeDistribution':
        p = np.asarray(self.probabilities, dtype=float)
        if p.ndim != 1:
            raise ValueError('probabilities must be a vector')
        if abs(p.sum() - 1.0) > 1e-10:
            raise ValueError(f'probabilities sum to {p.sum()!r}, not 1')
        p.setflags(write=False)
        object.__setattr__(self, 'probabilities', p)

        if self.derivative is not None:
            d = np.asarray(self.derivative, dtype=float)
            if d.shape != p.shape:
                raise ValueError('derivative and probabilities differ in shape')
            if abs(d.sum()) > 1e-9:
                raise ValueError(f'derivative sums to {d.sum()!r}, not 0')
            d.setflags(write=False)
            object.__setattr__(self, 'derivative', d)
        return self

    @property
    def n_outcomes(self) -> int:
        return self.probabilities.shape[0]

    def parity_expectation(self) -> float:
        """P(even) - P(odd); only meaningful for the parity basis."""
        if self.basis != MeasurementBasis.PARITY:
            raise ValueError('parity expectation needs a parity distribution')
        return float(self.probabilities[0] - self.probabilities[1])


class ReferenceOptima(BaseModel):
    """Closed-form Ramsey optima when the overhead dominates the sensing time."""

    css_time: float
    ghz_time: float
    ghz_css_ratio: float


class RamseyCurve(BaseModel):
    """Per-time Ramsey figures of merit (units: s, rad/s)."""

    times: tuple[float, ...]
    cfi_omega: tuple[float, ...]
    snr: tuple[float, ...]                      # CFI_omega / t_R
    t_overhead: float = Field(default=0.0, ge=0)
    snr_overhead: tuple[float, ...] = ()        # CFI_omega / (t_R + t_oh)
    best_time: float
    best_value: float
    reference: Optional[ReferenceOptima] = None

    def rows(self) -> list[dict]:
        """One CSV row per grid time."""
        overhead = self.snr_overhead or (None,) * len(self.times)
        return [
            {'t_s': t, 'cfi_omega': c, 'snr2': s, 'snr2_overhead': o}
            for t, c, s, o in zip(self.times, self.cfi_omega, self.snr, overhead)
        ]


class MleResult(BaseModel):
    """Monte-Carlo maximum-likelihood statistics."""

    phi0: float
    shots: int
    trials: int
    mean: float
    variance: float
    variance_se: float
    bias_se: float
    cfi: float
    cramer_rao: float           # 1 / (shots * CFI)
    boundary_hits: int = 0

    @property
    def bias(self) -> float:
        return self.mean - self.phi0
