"""
Experiment Service - run configurations, instance grids and the optimization sweep.
"""
import itertools
import logging
import time
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from concurrent.futures import ProcessPoolExecutor
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional

import django
import numpy as np
from pydantic import ValidationError

import dipolarvqe
from analysis.services import ClusterService, EntropyService, PreparationTimeService, SqueezingService
from analysis.services.clusters import MAX_CLUSTER_SPINS
from dipolarvqe.exceptions import ConfigError, InvalidParameterError, SimulationError, UndefinedSqueezingError
from engine.dto import PrepNoiseSpec
from ensemble.dto import SpinConfiguration
from ensemble.presets import PLATFORM_PRESETS
from ensemble.services import ConfigurationService
from experiments.dto import ExperimentConfig, Instance, InstanceMetrics, InstanceResult, RunSummary
from experiments.services.store import ResultStore
from optimizer.dto import OptimizationRecord
from optimizer.services import EntanglerOptimizationService

logger = logging.getLogger(__name__)

CONFIG_TEMPLATE = """\
# Experiment configuration.
# Units: lengths nm, frequencies Hz, times s, angles rad.

[configuration]
kind = "chain"              # chain, square-lattice, circle or random-3d
n = "2..4"                  # integer, list or inclusive range "start..stop"
scale = 10.0                # spacing in nm (random-3d: cube side scale * n^(1/3))
model = "{model}"
seed_count = 3              # or an explicit list: seeds = [1, 2, 3]
master_seed = 0

[circuit]
m = 1                       # entangler layers: integer, list or range
basis = "full-z"            # full-z, total-jz or parity

[noise]
init_fidelity = {init_fidelity}
readout_fidelity = {readout_fidelity}
# t2_prep = 1e-5            # dephasing during preparation; absent means none
{ramsey_t2}stretch = {stretch}

[cmaes]
sigma0 = 0.3
max_generations = 2000
restarts = 1

[run]
out = "results"
workers = 1
"""


def _dotted(location: tuple) -> str:
    return '.'.join(str(part) for part in location) or 'config'


class ExperimentService:
    """Service for declarative optimization sweeps."""

    @staticmethod
    def config_template(preset: Optional[str] = None) -> str:
        """
        TOML text of a complete run configuration.

        Args:
            preset: Platform whose model and noise figures seed the document

        Raises:
            InvalidParameterError: Unknown preset
        """
        if preset is None:
            values = {
                'model': 'dipolar-spin-half',
                'init_fidelity': 1.0,
                'readout_fidelity': 1.0,
                'ramsey_t2': '# ramsey_t2 = 1e-5\n',
                'stretch': 1.0,
            }
        else:
            if preset not in PLATFORM_PRESETS:
                raise InvalidParameterError('preset', f'unknown preset {preset!r}, choose from {sorted(PLATFORM_PRESETS)}')
            platform = PLATFORM_PRESETS[preset]
            values = {
                'model': platform.interaction_model,
                'init_fidelity': platform.init_fidelity,
                'readout_fidelity': platform.readout_fidelity,
                'ramsey_t2': f'ramsey_t2 = {platform.t2_s!r}\n',
                'stretch': platform.stretch or 1.0,
            }
        return CONFIG_TEMPLATE.format(**values)

    @staticmethod
    def parse_config(document: dict) -> ExperimentConfig:
        """
        Validate a decoded configuration document.

        Raises:
            ConfigError: First invalid or unknown key, by dotted path
        """
        try:
            return ExperimentConfig.model_validate(document)
        except ValidationError as e:
            error = e.errors()[0]
            raise ConfigError(_dotted(error['loc']), error['msg']) from e

    @staticmethod
    def load_config(path: Path | str) -> ExperimentConfig:
        """
        Read and validate a TOML run configuration.

        Raises:
            ConfigError: Missing file, TOML syntax or schema violation
        """
        try:
            with open(path, 'rb') as handle:
                document = tomllib.load(handle)
        except OSError as e:
            raise ConfigError('config', f'cannot read {path}: {e.strerror}') from e
        except tomllib.TOMLDecodeError as e:
            raise ConfigError('config', f'{path}: {e}') from e
        return ExperimentService.parse_config(document)

    @staticmethod
    def with_overrides(
        config: ExperimentConfig,
        seed: Optional[int] = None,
        out: Optional[str] = None,
        workers: Optional[int] = None,
    ) -> ExperimentConfig:
        """Apply command-line flags; the result is validated like a file."""
        document = config.model_dump(mode='json')
        if seed is not None:
            document['configuration']['master_seed'] = seed
        if out is not None:
            document['run']['out'] = str(out)
        if workers is not None:
            document['run']['workers'] = workers
        return ExperimentService.parse_config(document)

    @staticmethod
    def instance_seeds(config: ExperimentConfig) -> list[int]:
        """Explicit seeds, or one child of the master seed per instance index."""
        section = config.configuration
        if section.seeds is not None:
            return list(section.seeds)
        children = np.random.SeedSequence(section.master_seed).spawn(section.seed_count)
        return [int(child.generate_state(1, dtype=np.uint64)[0]) for child in children]

    @staticmethod
    def instances(config: ExperimentConfig) -> list[Instance]:
        """The (n, m, seed) grid in n-major order."""
        seeds = ExperimentService.instance_seeds(config)
        return [
            Instance(n=n, m=m, seed=seed)
            for n, m, seed in itertools.product(config.configuration.n, config.circuit.m, seeds)
        ]

    @staticmethod
    def optimizer_seed(instance: Instance) -> int:
        entropy = np.random.SeedSequence([instance.seed, instance.n, instance.m])
        return int(entropy.generate_state(1, dtype=np.uint64)[0])

    @staticmethod
    def derived_metrics(
        configuration: SpinConfiguration,
        record: OptimizationRecord,
        noise: PrepNoiseSpec,
    ) -> InstanceMetrics:
        """Re-simulate the optimum and characterize it."""
        state = EntanglerOptimizationService.prepare_state(configuration, record.theta, noise)
        preparation = PreparationTimeService.preparation_time(record.theta, record.f_dd_hz)
        sizes = []
        if configuration.n_spins <= MAX_CLUSTER_SPINS:
            sizes = ClusterService.cluster_partition(state).sizes
        try:
            xi_squared = SqueezingService.squeezing_parameter(state).xi_squared
        except UndefinedSqueezingError:
            xi_squared = None
        return InstanceMetrics(
            cfi=record.score,
            fdd_t=preparation.fdd_t,
            f_dd_hz=record.f_dd_hz,
            entropies=EntropyService.single_spin_entropies(state),
            cluster_sizes=sizes,
            xi_squared=xi_squared,
        )

    @staticmethod
    def run_instance(config: ExperimentConfig, instance: Instance) -> InstanceResult:
        """
        Optimize one instance; failures are captured in the result.

        Runs in worker processes, so it touches no database.
        """
        config_hash = config.config_hash()
        section = config.configuration
        common = {
            'config_hash': config_hash,
            'instance_key': instance.key(config_hash),
            'config': config.canonical(),
            'n': instance.n,
            'm': instance.m,
            'seed': instance.seed,
            'version': dipolarvqe.__version__,
        }
        logger.info(f'Instance n={instance.n} m={instance.m} seed={instance.seed} started')
        try:
            configuration = ConfigurationService.generate_configuration(
                section.kind,
                instance.n,
                section.scale,
                seed=instance.seed,
                model=section.model,
                coupling_constants=section.coupling_constants,
            )
            noise = config.noise.prep_noise()
            record = EntanglerOptimizationService.optimize_entangler(
                configuration,
                instance.m,
                basis=config.circuit.basis,
                noise=noise,
                cma=config.cmaes.strategy(ExperimentService.optimizer_seed(instance)),
                restarts=config.cmaes.restarts,
            )
            metrics = ExperimentService.derived_metrics(configuration, record, noise)
        except SimulationError as e:
            logger.error(f'Instance n={instance.n} m={instance.m} seed={instance.seed} failed: {e.message}')
            return InstanceResult(
                **common, status='failed', error=e.to_dict(), created_at=datetime.now(timezone.utc),
            )
        except Exception as e:
            logger.error(f'Instance n={instance.n} m={instance.m} seed={instance.seed} crashed: {e}')
            return InstanceResult(
                **common,
                status='failed',
                error={'error_code': 'INTERNAL_ERROR', 'message': f'{type(e).__name__}: {e}'},
                created_at=datetime.now(timezone.utc),
            )

        logger.info(
            f'Instance n={instance.n} m={instance.m} seed={instance.seed} finished: '
            f'CFI={metrics.cfi:.4f}, f_dd*T={metrics.fdd_t:.3f}'
        )
        return InstanceResult(
            **common,
            configuration=configuration.to_document(),
            record=record,
            metrics=metrics,
            created_at=datetime.now(timezone.utc),
        )

    @staticmethod
    def run(config: ExperimentConfig, resume: bool = True) -> RunSummary:
        """
        Run every pending instance of the grid and rewrite the aggregates.

        Args:
            config: Validated run configuration
            resume: Skip instances whose completed record already exists

        Returns:
            RunSummary: Counts and the new results in grid order
        """
        store = ResultStore(config.run.out)
        config_hash = config.config_hash()
        instances = ExperimentService.instances(config)
        pending = [i for i in instances if not (resume and store.is_complete(i.key(config_hash)))]
        summary = RunSummary(config_hash=config_hash, skipped=len(instances) - len(pending))
        logger.info(
            f'Run {config_hash[:12]}: {len(instances)} instances, {summary.skipped} already complete, '
            f'{config.run.workers} worker(s)'
        )

        started = time.perf_counter()
        if config.run.workers > 1 and len(pending) > 1:
            with ProcessPoolExecutor(max_workers=config.run.workers, initializer=django.setup) as executor:
                results = list(executor.map(
                    ExperimentService.run_instance, itertools.repeat(config), pending,
                ))
        else:
            results = [ExperimentService.run_instance(config, instance) for instance in pending]

        for result in results:
            store.save(result)
        summary.results = results
        summary.completed = sum(1 for r in results if r.ok)
        summary.failed = len(results) - summary.completed

        completed = store.completed(i.key(config_hash) for i in instances)
        store.write_aggregate(completed)
        store.write_summary(completed)

        elapsed = time.perf_counter() - started
        if summary.failed:
            logger.warning(f'Run {config_hash[:12]}: {summary.failed} instance(s) failed')
        logger.info(
            f'Run {config_hash[:12]} done in {elapsed:.1f} s: {summary.completed} new, '
            f'{summary.skipped} skipped, {summary.failed} failed'
        )
        return summary
