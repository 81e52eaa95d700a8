"""
Entangler Optimization Service - CFI and fidelity objectives for CMA-ES.
"""
import logging
import math
from concurrent.futures import Executor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from dipolarvqe.exceptions import InvalidParameterError
from engine.dto import CircuitParams, PrepNoiseSpec, QuantumState
from engine.services import EntanglerService, GateService
from ensemble.dto import Hamiltonian, SpinConfiguration
from ensemble.services import CouplingService, HamiltonianService
from metrology.dto import MeasurementBasis
from metrology.services import FisherInformationService
from optimizer.dto import CmaesConfig, OptimizationRecord
from optimizer.services.cmaes import CmaesService

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EntanglerProblem:
    """Everything needed to turn a raw parameter vector into an output state."""

    hamiltonian: Hamiltonian
    tau_bound: float
    f_dd_hz: float
    initial: QuantumState
    noise: PrepNoiseSpec

    def params(self, vector) -> CircuitParams:
        return CircuitParams.from_vector(vector, self.tau_bound)

    def state(self, vector) -> QuantumState:
        noise = self.noise if self.noise.needs_density else None
        return EntanglerService.apply_entangler(self.params(vector), self.hamiltonian, self.initial, noise)


@dataclass(frozen=True)
class NegativeCfiCost:
    """theta -> -CFI_phi of the prepared state; picklable for process pools."""

    problem: EntanglerProblem
    basis: MeasurementBasis

    def __call__(self, vector) -> float:
        state = self.problem.state(vector)
        return -FisherInformationService.cfi_phi(state, self.basis, self.problem.noise.readout_fidelity)


@dataclass(frozen=True)
class InfidelityCost:
    """theta -> 1 - |<target|S(theta)|CSS>|^2."""

    problem: EntanglerProblem
    target: np.ndarray

    def __call__(self, vector) -> float:
        output = self.problem.state(vector).data
        return 1.0 - float(abs(np.vdot(self.target, output)) ** 2)


class EntanglerOptimizationService:
    """Service for variational preparation of metrological states."""

    @staticmethod
    def build_problem(
        config: SpinConfiguration,
        noise: Optional[PrepNoiseSpec] = None,
    ) -> EntanglerProblem:
        """
        Hamiltonian, tau bound 1/f_dd and initial state of an instance.

        Raises:
            UndefinedCouplingError: Single spin
        """
        noise = noise or PrepNoiseSpec()
        coupling, hamiltonian = HamiltonianService.for_configuration(config)
        f_dd = CouplingService.mean_nn_coupling(coupling, config)
        return EntanglerProblem(
            hamiltonian=hamiltonian,
            tau_bound=1.0 / f_dd,
            f_dd_hz=f_dd,
            initial=GateService.initial_state(config.n_spins, noise.init_fidelity),
            noise=noise,
        )

    @staticmethod
    def search_config(m: int, tau_bound: float, cma: Optional[CmaesConfig] = None) -> CmaesConfig:
        """Box [0, 1/f_dd] on every tau and tau', unbounded angles in units of 2pi."""
        cma = cma or CmaesConfig()
        bounds = ((0.0, tau_bound), (None, None), (0.0, tau_bound)) * m
        return cma.model_copy(update={'bounds': bounds, 'unbounded_scale': 2 * math.pi})

    @staticmethod
    def optimize_entangler(
        config: SpinConfiguration,
        m: int,
        basis: MeasurementBasis | str = MeasurementBasis.FULL_Z,
        noise: Optional[PrepNoiseSpec] = None,
        cma: Optional[CmaesConfig] = None,
        restarts: int = 1,
        executor: Optional[Executor] = None,
    ) -> OptimizationRecord:
        """
        Maximize the CFI of S(theta)|CSS> by minimizing its negation.

        Args:
            config: Spin configuration
            m: Number of entangler layers (0 gives the CSS)
            basis: Readout basis
            noise: Initialization, preparation-dephasing and readout noise
            cma: Strategy settings; bounds are set here
            restarts: Independent CMA-ES runs, best kept
            executor: Optional executor for population evaluation

        Returns:
            OptimizationRecord: best_cost = -CFI, score = CFI, theta in
            (tau_1, angle_1, tau'_1, ...) order with angles wrapped
        """
        if m < 0:
            raise InvalidParameterError('m', f'must be non-negative, got {m}')
        basis = MeasurementBasis(basis)
        if config.n_spins == 1 and m == 0:
            # no interaction window, so no tau bound or f_dd
            noise = noise or PrepNoiseSpec()
            state = GateService.initial_state(1, noise.init_fidelity)
            cfi = FisherInformationService.cfi_phi(state, basis, noise.readout_fidelity)
            return OptimizationRecord(
                theta=(), best_cost=-cfi, evaluations=1, generations=0,
                termination='no_parameters', m=0, score=cfi,
            )
        problem = EntanglerOptimizationService.build_problem(config, noise)
        cost = NegativeCfiCost(problem=problem, basis=basis)

        logger.info(
            f'Optimizing {config.label or "configuration"} (N={config.n_spins}, m={m}, '
            f'basis={basis.value}, f_dd={problem.f_dd_hz:.4g} Hz)'
        )
        if m == 0:
            value = cost(())
            record = OptimizationRecord(theta=(), best_cost=value, evaluations=1, generations=0,
                                        termination='no_parameters')
        else:
            search = EntanglerOptimizationService.search_config(m, problem.tau_bound, cma)
            record = CmaesService.minimize_with_restarts(cost, 3 * m, search, restarts, executor)

        params = problem.params(record.theta)
        return record.model_copy(update={
            'theta': params.theta,
            'm': m,
            'tau_bound': problem.tau_bound,
            'f_dd_hz': problem.f_dd_hz,
            'score': -record.best_cost,
        })

    @staticmethod
    def optimize_fidelity(
        target: QuantumState,
        config: SpinConfiguration,
        m: int,
        cma: Optional[CmaesConfig] = None,
        restarts: int = 1,
        executor: Optional[Executor] = None,
    ) -> OptimizationRecord:
        """
        Minimize 1 - |<target|S(theta)|CSS>|^2 over the noiseless entangler.

        Returns:
            OptimizationRecord: best_cost = infidelity, score = fidelity

        Raises:
            InvalidParameterError: Mixed target, m < 1
            DimensionMismatchError: Target and configuration sizes differ
        """
        if not target.is_pure:
            raise InvalidParameterError('target', 'fidelity cost needs a pure target state')
        if m < 1:
            raise InvalidParameterError('m', f'must be at least 1, got {m}')
        problem = EntanglerOptimizationService.build_problem(config)
        GateService.check_dimensions(target, problem.hamiltonian)
        cost = InfidelityCost(problem=problem, target=target.data)

        search = EntanglerOptimizationService.search_config(m, problem.tau_bound, cma)
        record = CmaesService.minimize_with_restarts(cost, 3 * m, search, restarts, executor)
        params = problem.params(record.theta)
        return record.model_copy(update={
            'theta': params.theta,
            'm': m,
            'tau_bound': problem.tau_bound,
            'f_dd_hz': problem.f_dd_hz,
            'score': 1.0 - record.best_cost,
        })

    @staticmethod
    def prepare_state(
        config: SpinConfiguration,
        theta,
        noise: Optional[PrepNoiseSpec] = None,
    ) -> QuantumState:
        """Re-simulate a recorded parameter vector deterministically."""
        return EntanglerOptimizationService.build_problem(config, noise).state(theta)
