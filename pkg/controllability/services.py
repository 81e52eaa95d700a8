"""
Controllability business logic (dynamical Lie algebra closure).
"""
import logging
import math
from functools import lru_cache
from itertools import product
from typing import Optional, Sequence

import numpy as np
from django.conf import settings

from controllability.dto import ControllabilityReport, ControlSystem, LieClosure
from dipolarvqe.exceptions import InvalidParameterError, NonHermitianGeneratorError
from ensemble.dto import SpinConfiguration
from ensemble.operators import PAULI, SpinOperators
from ensemble.presets import ELECTRON_GAMMA
from ensemble.services import CouplingService, HamiltonianService

logger = logging.getLogger(__name__)

# Irregular spacings (in units of the chain scale) so that no two couplings coincide
IRREGULAR_CHAIN = (0.0, 1.0, 2.3, 3.9, 5.8)


@lru_cache(maxsize=8)
def pauli_strings(n: int) -> np.ndarray:
    """All 4^N Pauli strings as a (4^N, 2^N, 2^N) stack, identity first."""
    strings = []
    for labels in product('ixyz', repeat=n):
        op = np.array([[1.0 + 0j]])
        for label in labels:
            op = np.kron(op, PAULI[label])
        strings.append(op)
    stack = np.array(strings)
    stack.setflags(write=False)
    return stack


@lru_cache(maxsize=8)
def _projector(n: int) -> np.ndarray:
    """Rows vec(P_k^T) / 2^N, so projector @ vec(H) gives Tr(P_k H) / 2^N."""
    dim = 1 << n
    stack = pauli_strings(n)
    rows = stack.transpose(0, 2, 1).reshape(4 ** n, dim * dim) / dim
    rows.setflags(write=False)
    return rows


class LieAlgebraService:
    """Service for dynamical Lie algebras of globally controlled spin systems."""

    @staticmethod
    def to_pauli(operator: np.ndarray, n: int) -> np.ndarray:
        """Real Pauli coefficients c_k = Tr(P_k H) / 2^N of a Hermitian operator."""
        return np.real(_projector(n) @ np.asarray(operator).reshape(-1))

    @staticmethod
    def from_pauli(coefficients: np.ndarray, n: int) -> np.ndarray:
        return np.tensordot(coefficients, pauli_strings(n), axes=1)

    @staticmethod
    def lie_closure(
        generators: Sequence[np.ndarray],
        threshold: Optional[float] = None,
        max_rounds: Optional[int] = None,
    ) -> LieClosure:
        """
        Close {-iH_0, -iH_1, ...} under commutators.

        Each round commutes the directions added in the previous round with
        the whole current basis and keeps the candidates that extend the
        span, judged by singular values of their residuals.

        Args:
            generators: Hermitian 2^N x 2^N matrices
            threshold: Singular-value threshold for unit-norm candidates
            max_rounds: Round budget; hitting it marks the result exhausted

        Returns:
            LieClosure: Orthonormal basis of the algebra without identity

        Raises:
            NonHermitianGeneratorError: A generator is not Hermitian
            InvalidParameterError: No generators, or more than LIE_MAX_SPINS spins
        """
        threshold = settings.SIMULATION['LIE_RANK_THRESHOLD'] if threshold is None else threshold
        max_rounds = settings.SIMULATION['LIE_MAX_ROUNDS'] if max_rounds is None else max_rounds
        if not generators:
            raise InvalidParameterError('generators', 'at least one generator is required')

        dim = np.asarray(generators[0]).shape[0]
        n = dim.bit_length() - 1
        if n > settings.SIMULATION['LIE_MAX_SPINS']:
            raise InvalidParameterError('generators', f'closure supports at most {settings.SIMULATION["LIE_MAX_SPINS"]} spins')

        vectors = []
        for index, generator in enumerate(generators):
            generator = np.asarray(generator, dtype=complex)
            if generator.shape != (dim, dim):
                raise InvalidParameterError('generators', f'generator {index} has shape {generator.shape}')
            scale = max(np.max(np.abs(generator)), 1e-300)
            if np.max(np.abs(generator - generator.conj().T)) > 1e-12 * scale:
                raise NonHermitianGeneratorError(index)
            vectors.append(LieAlgebraService.to_pauli(generator, n))

        basis = np.zeros((0, 4 ** n))
        new = LieAlgebraService._extend(basis, np.array(vectors), threshold)
        basis = new
        full = 4 ** n - 1
        rounds = 0
        exhausted = False

        while new.shape[0] and basis.shape[0] < full:
            if rounds >= max_rounds:
                exhausted = True
                logger.warning(f'Lie closure stopped after {rounds} rounds at dimension {basis.shape[0]}')
                break
            rounds += 1
            candidates = LieAlgebraService._commutators(new, basis, n)
            new = LieAlgebraService._extend(basis, candidates, threshold)
            basis = np.vstack([basis, new])
            logger.info(f'Lie closure round {rounds}: +{new.shape[0]} -> dimension {basis.shape[0]}')

        return LieClosure(n_spins=n, basis=basis, rounds=rounds, exhausted=exhausted)

    @staticmethod
    def _commutators(left: np.ndarray, right: np.ndarray, n: int) -> np.ndarray:
        """Pauli coefficients of -i[A, B] for every A in `left`, B in `right`."""
        projector = _projector(n)
        right_ops = LieAlgebraService.from_pauli(right, n)
        blocks = []
        for row in left:
            a = LieAlgebraService.from_pauli(row, n)
            brackets = -1j * (a @ right_ops - right_ops @ a)
            blocks.append(np.real(brackets.reshape(right_ops.shape[0], -1) @ projector.T))
        return np.vstack(blocks)

    @staticmethod
    def _extend(basis: np.ndarray, candidates: np.ndarray, threshold: float) -> np.ndarray:
        """Orthonormal directions of the candidates outside span(basis), identity removed."""
        candidates = candidates.copy()
        candidates[:, 0] = 0.0
        norms = np.linalg.norm(candidates, axis=1)
        candidates = candidates[norms > threshold] / norms[norms > threshold, None]
        if not candidates.shape[0]:
            return np.zeros((0, basis.shape[1]))
        # projected twice to keep the basis orthonormal to rounding
        for _ in range(2):
            if basis.shape[0]:
                candidates = candidates - (candidates @ basis.T) @ basis
        _, singular, vt = np.linalg.svd(candidates, full_matrices=False)
        return vt[singular > threshold]

    @staticmethod
    def system_generators(
        n: int,
        system: ControlSystem | str = ControlSystem.DIPOLAR,
        config: Optional[SpinConfiguration] = None,
    ) -> list[np.ndarray]:
        """
        Drift and global controls of a named system.

        The dipolar drift is built on `config`, or on an irregular chain
        with the field perpendicular to it.
        """
        system = ControlSystem(system)
        controls = [SpinOperators.collective('x', n), SpinOperators.collective('y', n)]
        if system == ControlSystem.GLOBAL_ONLY:
            return controls
        if system == ControlSystem.SYMMETRIC_ISING:
            sz = [SpinOperators.single('z', i, n) for i in range(n)]
            drift = sum(sz[i] @ sz[j] for i in range(n) for j in range(i + 1, n))
            return [drift] + controls

        if n < 2:
            raise InvalidParameterError('n', 'a dipolar drift needs at least two spins')
        if config is None:
            config = LieAlgebraService.irregular_chain(n)
        coupling = CouplingService.coupling_matrix(config)
        hamiltonian = HamiltonianService.build_hamiltonian(coupling, config.model, config.coupling_constants)
        return [hamiltonian.matrix] + controls

    @staticmethod
    def irregular_chain(n: int, scale: float = 10.0) -> SpinConfiguration:
        if n > len(IRREGULAR_CHAIN):
            raise InvalidParameterError('n', f'irregular chain has at most {len(IRREGULAR_CHAIN)} spins')
        return SpinConfiguration(
            positions=tuple((x * scale, 0.0, 0.0) for x in IRREGULAR_CHAIN[:n]),
            gamma=(ELECTRON_GAMMA,) * n,
            label=f'irregular-chain-n{n}',
        )

    @staticmethod
    def controllability_report(
        n: int,
        system: ControlSystem | str = ControlSystem.DIPOLAR,
        config: Optional[SpinConfiguration] = None,
    ) -> ControllabilityReport:
        """
        Dimension of the dynamical Lie algebra against the controllability bounds.

        Args:
            n: Number of spins, 1..LIE_MAX_SPINS
            system: dipolar, symmetric-ising or global-only
            config: Optional configuration for the dipolar drift

        Returns:
            ControllabilityReport: complete when the algebra is su(2^N),
            subspace when the algebra plus identity reaches C(N+3, N) - 1
        """
        if not 1 <= n <= settings.SIMULATION['LIE_MAX_SPINS']:
            raise InvalidParameterError('n', f'must lie in [1, {settings.SIMULATION["LIE_MAX_SPINS"]}], got {n}')
        system = ControlSystem(system)
        closure = LieAlgebraService.lie_closure(LieAlgebraService.system_generators(n, system, config))

        lower = math.comb(n + 3, n) - 1
        upper = 4 ** n - 1
        # the subspace bound counts in u(2^N), the complete bound in su(2^N)
        if closure.dimension >= upper:
            verdict = 'complete'
        elif closure.dimension_with_identity >= lower:
            verdict = 'subspace'
        else:
            verdict = 'restricted'
        if closure.exhausted:
            verdict += ' (lower bound)'

        logger.info(f'{system.value} N={n}: dim {closure.dimension} ({closure.dimension_with_identity} with identity), bounds [{lower}, {upper}] -> {verdict}')
        return ControllabilityReport(
            n_spins=n,
            system=system,
            dimension=closure.dimension,
            dimension_with_identity=closure.dimension_with_identity,
            lower_bound=lower,
            upper_bound=upper,
            exhausted=closure.exhausted,
            verdict=verdict,
        )
