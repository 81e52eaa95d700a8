"""
Ensemble business logic (configurations, couplings, Hamiltonians).
"""
import logging
from typing import Optional, Sequence

import numpy as np
from django.conf import settings
from scipy import constants
from scipy.linalg import eigh

from dipolarvqe.exceptions import (
    CoincidentSpinsError,
    ConfigurationSamplingError,
    InvalidConfigurationError,
    InvalidParameterError,
    UndefinedCouplingError,
)
from ensemble.dto import (
    ConfigurationKind,
    CouplingMatrix,
    Hamiltonian,
    InteractionModel,
    MODEL_CONSTANTS,
    SpinConfiguration,
)
from ensemble.operators import SpinOperators
from ensemble.presets import ELECTRON_GAMMA

logger = logging.getLogger(__name__)

NM = 1e-9


class ConfigurationService:
    """Service for building spin configurations."""

    @staticmethod
    def square_lattice_sites(n: int) -> list[tuple[int, int]]:
        """
        Lattice sites in insertion order.

        The k-th shell grows a k x k square to (k+1) x (k+1): first the new
        column bottom-up, then the new row left to right, then the corner.
        Spins 1..4 form a unit square and spin 4 has spins 2, 3, 6 and 8 as
        nearest neighbours.
        """
        sites = [(0, 0)]
        k = 1
        while len(sites) < n:
            sites.extend((k, y) for y in range(k))
            sites.extend((x, k) for x in range(k))
            sites.append((k, k))
            k += 1
        return sites[:n]

    @staticmethod
    def scale_from_density(density_per_nm3: float) -> float:
        """Lattice spacing (nm) giving one spin per scale^3."""
        if density_per_nm3 <= 0:
            raise InvalidParameterError('density', 'must be positive')
        return density_per_nm3 ** (-1.0 / 3.0)

    @staticmethod
    def generate_configuration(
        kind: ConfigurationKind | str,
        n: int,
        scale: float,
        seed: Optional[int] = None,
        model: InteractionModel | str = InteractionModel.DIPOLAR,
        field_axis: Sequence[float] = (0.0, 0.0, 1.0),
        gamma: float = ELECTRON_GAMMA,
        coupling_constants: Optional[tuple[float, float]] = None,
        angular_factor: Optional[str] = None,
    ) -> SpinConfiguration:
        """
        Build a spin configuration.

        Args:
            kind: chain, square-lattice, circle or random-3d
            n: Number of spins
            scale: Spacing in nm (random-3d: cube side is scale * n^(1/3))
            seed: Seed for random-3d draws; stored on the configuration
            model: Interaction model tag
            field_axis: Quantization axis, normalized here
            gamma: Gyromagnetic ratio shared by every spin (rad/s/T)

        Returns:
            SpinConfiguration: Validated configuration

        Raises:
            InvalidConfigurationError: n < 1 or scale <= 0
            ConfigurationSamplingError: random-3d retries exhausted
        """
        kind = ConfigurationKind(kind)
        if n < 1:
            raise InvalidConfigurationError(f'n must be at least 1, got {n}')
        if scale <= 0:
            raise InvalidConfigurationError(f'scale must be positive, got {scale}')

        if kind == ConfigurationKind.CHAIN:
            positions = np.array([[i * scale, 0.0, 0.0] for i in range(n)])
        elif kind == ConfigurationKind.SQUARE_LATTICE:
            sites = ConfigurationService.square_lattice_sites(n)
            positions = np.array([[x * scale, y * scale, 0.0] for x, y in sites])
        elif kind == ConfigurationKind.CIRCLE:
            positions = ConfigurationService._circle(n, scale)
        else:
            positions = ConfigurationService._random_3d(n, scale, seed)

        axis = np.asarray(field_axis, dtype=float)
        axis = axis / np.linalg.norm(axis)

        config = SpinConfiguration(
            positions=tuple(tuple(float(c) for c in p) for p in positions),
            gamma=tuple(float(gamma) for _ in range(n)),
            field_axis=tuple(float(c) for c in axis),
            model=InteractionModel(model),
            coupling_constants=coupling_constants,
            angular_factor=angular_factor,
            label=f'{kind.value}-n{n}',
            seed=seed,
        )
        logger.debug(f'Generated {config.label} (scale={scale} nm, seed={seed})')
        return config

    @staticmethod
    def _circle(n: int, scale: float) -> np.ndarray:
        if n == 1:
            return np.zeros((1, 3))
        radius = scale / (2 * np.sin(np.pi / n))
        angles = 2 * np.pi * np.arange(n) / n
        return np.stack(
            [radius * np.cos(angles), radius * np.sin(angles), np.zeros(n)],
            axis=1,
        )

    @staticmethod
    def _random_3d(n: int, scale: float, seed: Optional[int]) -> np.ndarray:
        sim = settings.SIMULATION
        side = scale * n ** (1.0 / 3.0)
        min_distance = sim['MIN_DISTANCE_FRACTION'] * scale
        retries = sim['MAX_SAMPLING_RETRIES']
        rng = np.random.default_rng(seed)

        for _ in range(retries):
            positions = rng.uniform(0.0, side, size=(n, 3))
            if n == 1:
                return positions
            gaps = np.linalg.norm(positions[:, None, :] - positions[None, :, :], axis=-1)
            gaps[np.diag_indices(n)] = np.inf
            if gaps.min() >= min_distance:
                return positions

        raise ConfigurationSamplingError(n, retries)


class CouplingService:
    """Service for pairwise dipolar couplings."""

    @staticmethod
    def angular_factor(cos_beta: np.ndarray, reading: str) -> np.ndarray:
        """(1 - 3cos^2 b)/2, or the literal (1 - 3cos b)/2 reading."""
        if reading == 'cos1':
            return (1.0 - 3.0 * cos_beta) / 2.0
        return (1.0 - 3.0 * cos_beta ** 2) / 2.0

    @staticmethod
    def coupling_matrix(config: SpinConfiguration) -> CouplingMatrix:
        """
        Dipolar couplings in angular-frequency units.

        V_ij = (mu0/4pi) gamma_i gamma_j hbar / r^3 * A(beta), with a single
        hbar so that tau * V is dimensionless. beta is the angle between the
        segment and the field axis, folded into [0, pi/2].

        Args:
            config: Spin configuration

        Returns:
            CouplingMatrix: V in rad/s

        Raises:
            CoincidentSpinsError: Two spins at the same position
        """
        reading = config.angular_factor or settings.SIMULATION['ANGULAR_FACTOR']
        n = config.n_spins
        points = config.positions_array * NM
        gamma = np.asarray(config.gamma)
        axis = np.asarray(config.field_axis)
        prefactor = constants.mu_0 / (4 * np.pi) * constants.hbar

        v = np.zeros((n, n))
        for i in range(n):
            for j in range(i + 1, n):
                segment = points[j] - points[i]
                r = np.linalg.norm(segment)
                if r == 0.0:
                    raise CoincidentSpinsError(i, j)
                cos_beta = abs(segment @ axis) / r
                value = (
                    prefactor * gamma[i] * gamma[j] / r ** 3
                    * CouplingService.angular_factor(cos_beta, reading)
                )
                v[i, j] = v[j, i] = value
        return CouplingMatrix(v=v)

    @staticmethod
    def mean_nn_coupling(
        coupling: CouplingMatrix,
        config: SpinConfiguration,
        neighbor: str = 'distance',
    ) -> float:
        """
        Average nearest-neighbour coupling frequency f_dd in Hz.

        Args:
            coupling: Coupling matrix of the configuration
            config: Configuration (for distances)
            neighbor: 'distance' picks the closest spin, 'coupling' the
                strongest |V|

        Returns:
            float: mean over spins of |V_ij*| / 2pi

        Raises:
            UndefinedCouplingError: Fewer than two spins
        """
        n = config.n_spins
        if n < 2:
            raise UndefinedCouplingError()

        if neighbor == 'coupling':
            strengths = np.abs(coupling.v).copy()
            strengths[np.diag_indices(n)] = -np.inf
            nearest = np.argmax(strengths, axis=1)
        elif neighbor == 'distance':
            distances = config.distances()
            distances[np.diag_indices(n)] = np.inf
            nearest = np.argmin(distances, axis=1)
        else:
            raise InvalidParameterError('neighbor', f"expected 'distance' or 'coupling', got {neighbor!r}")

        values = np.abs(coupling.v[np.arange(n), nearest])
        return float(np.mean(values) / (2 * np.pi))


class HamiltonianService:
    """Service for the two-body interaction Hamiltonians."""

    @staticmethod
    def resolve_constants(
        model: InteractionModel | str,
        coupling_constants: Optional[tuple[float, float]] = None,
    ) -> tuple[float, float]:
        model = InteractionModel(model)
        if coupling_constants is not None:
            return coupling_constants
        if model == InteractionModel.GENERIC:
            raise InvalidParameterError('coupling_constants', 'generic model needs (J^I, J^S)')
        return MODEL_CONSTANTS[model]

    @staticmethod
    def interaction_matrix(
        coupling: CouplingMatrix,
        j_ising: float,
        j_symmetric: float,
    ) -> np.ndarray:
        """
        Dense sum_{i<j} V_ij (J^I Sz_i Sz_j + J^S S_i.S_j).

        The S.S flip-flop part connects basis states whose bits i, j differ.
        """
        n = coupling.n_spins
        dim = SpinOperators.dimension(n)
        bits = SpinOperators.basis_bits(n)
        sz = SpinOperators.spin_z_values(n)
        index = np.arange(dim)

        matrix = np.zeros((dim, dim), dtype=complex)
        diagonal = np.zeros(dim)
        for i in range(n):
            for j in range(i + 1, n):
                v = coupling.v[i, j]
                if v == 0.0:
                    continue
                diagonal += v * (j_ising + j_symmetric) * sz[:, i] * sz[:, j]
                if j_symmetric != 0.0:
                    mask = (1 << (n - 1 - i)) | (1 << (n - 1 - j))
                    source = index[bits[:, i] != bits[:, j]]
                    matrix[source ^ mask, source] += 0.5 * j_symmetric * v
        matrix[index, index] += diagonal
        return matrix

    @staticmethod
    def from_matrix(
        matrix: np.ndarray,
        n: int,
        model: InteractionModel | str = InteractionModel.GENERIC,
    ) -> Hamiltonian:
        """Wrap a Hermitian matrix with its eigendecomposition."""
        matrix = 0.5 * (matrix + matrix.conj().T)
        eigenvalues, eigenvectors = eigh(matrix)
        return Hamiltonian(
            matrix=matrix,
            eigenvalues=eigenvalues,
            eigenvectors=eigenvectors,
            model=InteractionModel(model),
            n_spins=n,
        )

    @staticmethod
    def build_hamiltonian(
        coupling: CouplingMatrix,
        model: InteractionModel | str = InteractionModel.DIPOLAR,
        coupling_constants: Optional[tuple[float, float]] = None,
    ) -> Hamiltonian:
        """
        Build the interaction Hamiltonian for a model.

        Args:
            coupling: Coupling matrix (rad/s)
            model: dipolar-spin-half, nv-effective, ising, cold-molecule or
                generic
            coupling_constants: (J^I, J^S), required for generic

        Returns:
            Hamiltonian: Dense matrix with cached eigendecomposition
        """
        j_ising, j_symmetric = HamiltonianService.resolve_constants(model, coupling_constants)
        matrix = HamiltonianService.interaction_matrix(coupling, j_ising, j_symmetric)
        hamiltonian = HamiltonianService.from_matrix(matrix, coupling.n_spins, model)
        logger.debug(
            f'Built {InteractionModel(model).value} Hamiltonian for {coupling.n_spins} spins '
            f'(J^I={j_ising}, J^S={j_symmetric})'
        )
        return hamiltonian

    @staticmethod
    def for_configuration(config: SpinConfiguration) -> tuple[CouplingMatrix, Hamiltonian]:
        """Coupling matrix and Hamiltonian of a configuration's own model."""
        coupling = CouplingService.coupling_matrix(config)
        hamiltonian = HamiltonianService.build_hamiltonian(
            coupling, config.model, config.coupling_constants
        )
        return coupling, hamiltonian
