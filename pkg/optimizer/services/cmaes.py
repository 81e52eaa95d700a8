"""
CMA-ES Service - (mu/mu_w, lambda) covariance matrix adaptation.

Strategy parameters follow the canonical settings: log-rank recombination
weights over the best half, cumulative step-size adaptation, rank-one and
rank-mu covariance updates. Candidates are drawn serially from one seeded
generator before any evaluation, so an executor cannot change the trace.
"""
import logging
import math
import time
from concurrent.futures import Executor
from typing import Callable, Optional, Sequence

import numpy as np

from dipolarvqe.exceptions import InvalidParameterError, NonFiniteCostError
from optimizer.dto import CmaesConfig, GenerationStats, OptimizationRecord

logger = logging.getLogger(__name__)

CostFunction = Callable[[np.ndarray], float]

MAX_CONDITION = 1e14


class _Strategy:
    """Static strategy parameters for dimension d and population lambda."""

    def __init__(self, dim: int, population: int):
        self.dim = dim
        self.lam = population
        self.mu = population // 2
        raw = np.log(population / 2 + 0.5) - np.log(np.arange(1, self.mu + 1))
        self.weights = raw / raw.sum()
        self.mueff = 1.0 / np.sum(self.weights ** 2)

        n = dim
        self.chi_n = math.sqrt(n) * (1 - 1 / (4 * n) + 1 / (21 * n ** 2))
        self.cc = (4 + self.mueff / n) / (n + 4 + 2 * self.mueff / n)
        self.cs = (self.mueff + 2) / (n + self.mueff + 5)
        self.c1 = 2 / ((n + 1.3) ** 2 + self.mueff)
        self.cmu = min(1 - self.c1, 2 * (self.mueff - 2 + 1 / self.mueff) / ((n + 2) ** 2 + self.mueff))
        self.damps = 1 + 2 * max(0.0, math.sqrt((self.mueff - 1) / (n + 1)) - 1) + self.cs


class _Box:
    """Maps between normalized search coordinates and the caller's coordinates."""

    def __init__(self, dim: int, config: CmaesConfig):
        bounds = config.bounds or ((None, None),) * dim
        if len(bounds) != dim:
            raise InvalidParameterError('bounds', f'expected {dim} pairs, got {len(bounds)}')
        self.bounded = np.array([lo is not None for lo, _ in bounds])
        self.lower = np.array([lo if lo is not None else 0.0 for lo, _ in bounds], dtype=float)
        self.scale = np.array(
            [hi - lo if lo is not None else config.unbounded_scale for lo, hi in bounds],
            dtype=float,
        )

    def reflect(self, y: np.ndarray) -> np.ndarray:
        """Fold bounded coordinates into [0, 1]."""
        folded = np.mod(y, 2.0)
        folded = np.where(folded > 1.0, 2.0 - folded, folded)
        return np.where(self.bounded, folded, y)

    def to_user(self, y: np.ndarray) -> np.ndarray:
        return self.lower + self.scale * y

    def to_search(self, x: np.ndarray) -> np.ndarray:
        return (np.asarray(x, dtype=float) - self.lower) / self.scale


class CmaesService:
    """Service for derivative-free minimization."""

    @staticmethod
    def cmaes_minimize(
        cost: CostFunction,
        dim: int,
        config: Optional[CmaesConfig] = None,
        x0: Optional[Sequence[float]] = None,
        executor: Optional[Executor] = None,
    ) -> OptimizationRecord:
        """
        Minimize a black-box cost with CMA-ES.

        Args:
            cost: theta -> real, evaluated on repaired (in-box) points
            dim: Search dimension
            config: Strategy settings, bounds and seed
            x0: Starting mean in caller coordinates; drawn uniformly from
                the box (and from [0, unbounded_scale)) when omitted
            executor: Optional executor whose map evaluates a population

        Returns:
            OptimizationRecord: Per-generation trace and best point

        Raises:
            InvalidParameterError: dim < 1 or mismatched bounds
            NonFiniteCostError: Candidate stayed non-finite after resampling
        """
        config = config or CmaesConfig()
        if dim < 1:
            raise InvalidParameterError('dim', f'must be at least 1, got {dim}')

        started = time.perf_counter()
        rng = np.random.default_rng(config.seed)
        box = _Box(dim, config)
        strategy = _Strategy(dim, config.population_size(dim))

        mean = box.reflect(box.to_search(x0) if x0 is not None else rng.uniform(0.0, 1.0, dim))
        sigma = config.sigma0
        cov = np.eye(dim)
        eigenvalues = np.ones(dim)
        eigenbasis = np.eye(dim)
        p_sigma = np.zeros(dim)
        p_c = np.zeros(dim)

        best_y, best_cost = mean.copy(), math.inf
        history: list[GenerationStats] = []
        evaluations = 0
        termination = 'max_generations'

        for generation in range(1, config.max_generations + 1):
            sqrt_eig = np.sqrt(eigenvalues)
            samples = [
                CmaesService._sample(rng, mean, sigma, eigenbasis, sqrt_eig, box)
                for _ in range(strategy.lam)
            ]
            points = [box.to_user(y) for y in samples]
            mapper = executor.map if executor is not None else map
            costs = [float(value) for value in mapper(cost, points)]
            evaluations += len(costs)

            for k in range(strategy.lam):
                retries = 0
                while not math.isfinite(costs[k]):
                    if retries >= config.max_resamples:
                        raise NonFiniteCostError(retries)
                    samples[k] = CmaesService._sample(rng, mean, sigma, eigenbasis, sqrt_eig, box)
                    costs[k] = float(cost(box.to_user(samples[k])))
                    evaluations += 1
                    retries += 1

            order = np.argsort(costs, kind='stable')
            if costs[order[0]] < best_cost:
                best_cost = costs[order[0]]
                best_y = samples[order[0]].copy()

            # recombination on the repaired points
            selected = np.array([samples[i] for i in order[:strategy.mu]])
            old_mean = mean
            mean = strategy.weights @ selected
            step = (mean - old_mean) / sigma

            inv_sqrt = eigenbasis @ np.diag(1.0 / sqrt_eig) @ eigenbasis.T
            p_sigma = (1 - strategy.cs) * p_sigma + math.sqrt(
                strategy.cs * (2 - strategy.cs) * strategy.mueff
            ) * (inv_sqrt @ step)
            path_ratio = (
                np.linalg.norm(p_sigma)
                / math.sqrt(1 - (1 - strategy.cs) ** (2 * generation))
                / strategy.chi_n
            )
            h_sigma = 1.0 if path_ratio < 1.4 + 2 / (dim + 1) else 0.0
            p_c = (1 - strategy.cc) * p_c + h_sigma * math.sqrt(
                strategy.cc * (2 - strategy.cc) * strategy.mueff
            ) * step

            deviations = (selected - old_mean) / sigma
            c1a = strategy.c1 * (1 - (1 - h_sigma) * strategy.cc * (2 - strategy.cc))
            cov = (
                (1 - c1a - strategy.cmu) * cov
                + strategy.c1 * np.outer(p_c, p_c)
                + strategy.cmu * (deviations.T * strategy.weights) @ deviations
            )
            sigma *= math.exp(
                min(1.0, (strategy.cs / strategy.damps) * (np.linalg.norm(p_sigma) / strategy.chi_n - 1))
            )

            cov = np.triu(cov) + np.triu(cov, 1).T
            eigenvalues, eigenbasis = np.linalg.eigh(cov)
            eigenvalues = np.maximum(eigenvalues, 1e-300)

            history.append(GenerationStats(
                generation=generation,
                best_cost=best_cost,
                mean_cost=float(np.mean(costs)),
                sigma=sigma,
            ))
            logger.debug(f'Generation {generation}: best {best_cost:.6g}, sigma {sigma:.3g}')

            reason = CmaesService._should_stop(config, history, sigma, eigenvalues)
            if reason:
                termination = reason
                break

        record = OptimizationRecord(
            history=tuple(history),
            theta=tuple(float(v) for v in box.to_user(best_y)),
            best_cost=best_cost,
            evaluations=evaluations,
            generations=len(history),
            seed=config.seed,
            wall_time=time.perf_counter() - started,
            termination=termination,
        )
        logger.info(
            f'CMA-ES stopped ({termination}) after {record.generations} generations, '
            f'{evaluations} evaluations: best cost {best_cost:.6g}'
        )
        return record

    @staticmethod
    def _sample(rng, mean, sigma, eigenbasis, sqrt_eig, box: _Box) -> np.ndarray:
        z = rng.standard_normal(mean.shape[0])
        return box.reflect(mean + sigma * (eigenbasis @ (sqrt_eig * z)))

    @staticmethod
    def _should_stop(
        config: CmaesConfig,
        history: list[GenerationStats],
        sigma: float,
        eigenvalues: np.ndarray,
    ) -> str:
        best = history[-1].best_cost
        if config.target is not None and best <= config.target:
            return 'target'
        if sigma * math.sqrt(eigenvalues.max()) < config.tol_x:
            return 'tol_x'
        if eigenvalues.max() / eigenvalues.min() > MAX_CONDITION:
            return 'condition'
        window = config.stagnation_generations
        if len(history) > window:
            earlier = history[-1 - window].best_cost
            if earlier - best <= config.stagnation_tol * max(abs(earlier), 1e-300):
                return 'stagnation'
        return ''

    @staticmethod
    def minimize_with_restarts(
        cost: CostFunction,
        dim: int,
        config: Optional[CmaesConfig] = None,
        restarts: int = 1,
        executor: Optional[Executor] = None,
    ) -> OptimizationRecord:
        """
        Run CMA-ES `restarts` times with seeds spawned from config.seed.

        Returns:
            OptimizationRecord: The best run, with restart set to its index
            and evaluations counting every run
        """
        config = config or CmaesConfig()
        if restarts < 1:
            raise InvalidParameterError('restarts', f'must be at least 1, got {restarts}')
        if restarts == 1:
            return CmaesService.cmaes_minimize(cost, dim, config, executor=executor)

        children = np.random.SeedSequence(config.seed).spawn(restarts)
        best: Optional[OptimizationRecord] = None
        total = 0
        for index, child in enumerate(children):
            seed = int(child.generate_state(1, dtype=np.uint64)[0])
            record = CmaesService.cmaes_minimize(
                cost, dim, config.model_copy(update={'seed': seed}), executor=executor
            )
            total += record.evaluations
            if best is None or record.best_cost < best.best_cost:
                best = record.model_copy(update={'restart': index})
            if config.target is not None and record.best_cost <= config.target:
                break
        logger.info(f'Best of {restarts} restarts: run {best.restart}, cost {best.best_cost:.6g}')
        return best.model_copy(update={'evaluations': total})
