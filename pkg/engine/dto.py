"""
Engine Pydantic schemas (DTO).
"""
import math
from typing import Iterator

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationInfo, model_validator

TWO_PI = 2 * math.pi


class QuantumState(BaseModel):
    """
    Pure amplitude vector (length 2^N) or density matrix (2^N x 2^N).

    Use QuantumState.pure / QuantumState.density to build one; the spin
    count is inferred from the dimension.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    data: np.ndarray
    n_spins: int = Field(ge=0)

    @model_validator(mode='after')
    def check_invariants(self, info: ValidationInfo) -> 'QuantumState':
        context = info.context or {}
        data = np.array(self.data, dtype=complex)
        dim = 1 << self.n_spins

        if data.ndim == 1:
            if data.shape != (dim,):
                raise ValueError(f'expected {dim} amplitudes, got {data.shape[0]}')
            if abs(np.linalg.norm(data) - 1.0) > 1e-10:
                raise ValueError('pure state is not normalized')
        elif data.ndim == 2:
            if data.shape != (dim, dim):
                raise ValueError(f'expected a {dim}x{dim} density matrix, got {data.shape}')
            if abs(np.trace(data) - 1.0) > 1e-10:
                raise ValueError('density matrix trace is not 1')
            if np.max(np.abs(data - data.conj().T)) > 1e-10:
                raise ValueError('density matrix is not Hermitian')
            # Positivity costs a full eigendecomposition; beyond 8 spins it is skipped.
            if self.n_spins <= 8:
                tolerance = context.get('positivity_tolerance', 1e-9)
                if np.linalg.eigvalsh(data).min() < -tolerance:
                    raise ValueError('density matrix has a negative eigenvalue')
        else:
            raise ValueError('state data must be a vector or a matrix')

        data.setflags(write=False)
        object.__setattr__(self, 'data', data)
        return self

    @staticmethod
    def _spins_for(dim: int) -> int:
        n = dim.bit_length() - 1
        if dim < 1 or 1 << n != dim:
            raise ValueError(f'dimension {dim} is not a power of two')
        return n

    @classmethod
    def pure(cls, vector: np.ndarray) -> 'QuantumState':
        vector = np.asarray(vector)
        return cls(data=vector, n_spins=cls._spins_for(vector.shape[0]))

    @classmethod
    def density(cls, matrix: np.ndarray, positivity_tolerance: float = 1e-9) -> 'QuantumState':
        matrix = np.asarray(matrix)
        return cls.model_validate(
            {'data': matrix, 'n_spins': cls._spins_for(matrix.shape[0])},
            context={'positivity_tolerance': positivity_tolerance},
        )

    @property
    def is_pure(self) -> bool:
        return self.data.ndim == 1

    @property
    def dimension(self) -> int:
        return 1 << self.n_spins

    def density_matrix(self) -> np.ndarray:
        if self.is_pure:
            return np.outer(self.data, self.data.conj())
        return self.data

    def as_density(self) -> 'QuantumState':
        if not self.is_pure:
            return self
        return QuantumState.density(self.density_matrix())

    def expectation(self, operator: np.ndarray) -> float:
        """Real part of <O> for a Hermitian operator."""
        if self.is_pure:
            return float(np.real(np.vdot(self.data, operator @ self.data)))
        return float(np.real(np.trace(operator @ self.data)))

    def probabilities(self) -> np.ndarray:
        """Computational-basis populations."""
        if self.is_pure:
            return np.abs(self.data) ** 2
        return np.clip(np.real(np.diag(self.data)), 0.0, None)

    def purity(self) -> float:
        if self.is_pure:
            return 1.0
        return float(np.real(np.vdot(self.data, self.data)))


class CircuitParams(BaseModel):
    """theta = (tau_1, angle_1, tau'_1, ..., tau_m, angle_m, tau'_m)."""

    model_config = ConfigDict(frozen=True)

    m: int = Field(ge=0)
    theta: tuple[float, ...]
    tau_bound: float = Field(gt=0)

    @model_validator(mode='after')
    def check_invariants(self) -> 'CircuitParams':
        if len(self.theta) != 3 * self.m:
            raise ValueError(f'expected {3 * self.m} parameters, got {len(self.theta)}')
        slack = 1e-12 * self.tau_bound
        for tau, angle, tau_prime in self.layers():
            if not (-slack <= tau <= self.tau_bound + slack):
                raise ValueError(f'tau={tau} outside [0, {self.tau_bound}]')
            if not (-slack <= tau_prime <= self.tau_bound + slack):
                raise ValueError(f"tau'={tau_prime} outside [0, {self.tau_bound}]")
            if not (0.0 <= angle < TWO_PI):
                raise ValueError(f'angle={angle} outside [0, 2pi)')
        return self

    @staticmethod
    def wrap_angle(angle: float) -> float:
        wrapped = math.fmod(angle, TWO_PI)
        if wrapped < 0:
            wrapped += TWO_PI
        return 0.0 if wrapped >= TWO_PI else wrapped

    @classmethod
    def from_vector(cls, vector, tau_bound: float) -> 'CircuitParams':
        """Build from a raw optimizer vector: angles wrapped, durations clipped to the box."""
        values = [float(x) for x in vector]
        if len(values) % 3:
            raise ValueError('parameter vector length must be a multiple of 3')
        theta = []
        for k, value in enumerate(values):
            if k % 3 == 1:
                theta.append(cls.wrap_angle(value))
            else:
                theta.append(min(max(value, 0.0), tau_bound))
        return cls(m=len(values) // 3, theta=tuple(theta), tau_bound=tau_bound)

    @classmethod
    def zeros(cls, m: int, tau_bound: float) -> 'CircuitParams':
        return cls(m=m, theta=(0.0,) * (3 * m), tau_bound=tau_bound)

    def layers(self) -> Iterator[tuple[float, float, float]]:
        for i in range(self.m):
            yield self.theta[3 * i], self.theta[3 * i + 1], self.theta[3 * i + 2]

    @property
    def total_interaction_time(self) -> float:
        """Sum of tau and tau' in seconds."""
        return float(sum(tau + tau_prime for tau, _, tau_prime in self.layers()))


class PrepNoiseSpec(BaseModel):
    """Initialization, preparation dephasing and readout imperfections."""

    model_config = ConfigDict(frozen=True)

    init_fidelity: float = Field(default=1.0, ge=-1.0, le=1.0)
    t2_prep: float = Field(default=math.inf, gt=0)
    readout_fidelity: float = Field(default=1.0, ge=0.5, le=1.0)

    @property
    def dephasing_rate(self) -> float:
        """gamma_z = 1/(2 T2) per spin; zero for infinite T2."""
        return 0.0 if math.isinf(self.t2_prep) else 1.0 / (2.0 * self.t2_prep)

    @property
    def needs_density(self) -> bool:
        return self.init_fidelity < 1.0 or not math.isinf(self.t2_prep)
