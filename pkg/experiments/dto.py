"""
Experiments Pydantic schemas (DTO).

Run configurations are TOML documents with the tables below; every key has
a default and unknown keys are rejected. Units: lengths nm, frequencies Hz,
times s, angles rad.
"""
import hashlib
import json
import math
from datetime import datetime
from typing import Optional

from django.conf import settings
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from engine.dto import PrepNoiseSpec
from ensemble.dto import ConfigurationKind, InteractionModel
from metrology.dto import MeasurementBasis
from optimizer.dto import CmaesConfig, OptimizationRecord


def expand_range(value) -> list[int]:
    """Accept 3, [2, 3, 5] or the inclusive range '2..4'."""
    if isinstance(value, int):
        return [value]
    if isinstance(value, str):
        start, sep, stop = value.partition('..')
        if not sep:
            raise ValueError(f"expected an integer, a list or 'start..stop', got {value!r}")
        return list(range(int(start), int(stop) + 1))
    return list(value)


class _Section(BaseModel):
    model_config = ConfigDict(extra='forbid', frozen=True)


class ConfigurationSection(_Section):
    kind: ConfigurationKind = ConfigurationKind.CHAIN
    n: list[int] = Field(default_factory=lambda: [2])
    scale: float = Field(default=10.0, gt=0)
    model: InteractionModel = InteractionModel.DIPOLAR
    coupling_constants: Optional[tuple[float, float]] = None     # (J^I, J^S), generic model only
    seeds: Optional[list[int]] = None       # explicit instance seeds
    seed_count: int = Field(default=1, ge=1)
    master_seed: int = Field(default=0, ge=0, lt=2**64)

    @field_validator('n', mode='before')
    @classmethod
    def parse_n(cls, value):
        return expand_range(value)

    @field_validator('n')
    @classmethod
    def check_n(cls, value):
        if not value or min(value) < 2:
            raise ValueError('needs at least one spin count, each >= 2')
        return value

    @field_validator('seeds')
    @classmethod
    def check_seeds(cls, value):
        if value is not None and (not value or any(not 0 <= s < 2**64 for s in value)):
            raise ValueError('seeds must be a nonempty list of unsigned 64-bit integers')
        return value


class CircuitSection(_Section):
    m: list[int] = Field(default_factory=lambda: [1])
    basis: MeasurementBasis = MeasurementBasis.FULL_Z

    @field_validator('m', mode='before')
    @classmethod
    def parse_m(cls, value):
        return expand_range(value)

    @field_validator('m')
    @classmethod
    def check_m(cls, value):
        if not value or min(value) < 0:
            raise ValueError('needs at least one layer count, each >= 0')
        return value


class NoiseSection(_Section):
    init_fidelity: float = Field(default=1.0, ge=-1.0, le=1.0)
    readout_fidelity: float = Field(default=1.0, ge=0.5, le=1.0)
    t2_prep: Optional[float] = Field(default=None, gt=0)     # absent: no preparation dephasing
    ramsey_t2: Optional[float] = Field(default=None, gt=0)
    stretch: float = Field(default=1.0, ge=1.0)

    def prep_noise(self) -> PrepNoiseSpec:
        return PrepNoiseSpec(
            init_fidelity=self.init_fidelity,
            t2_prep=math.inf if self.t2_prep is None else self.t2_prep,
            readout_fidelity=self.readout_fidelity,
        )


class CmaesSection(_Section):
    population: Optional[int] = Field(default=None, ge=4)
    sigma0: float = Field(default_factory=lambda: settings.SIMULATION['CMAES_SIGMA0'], gt=0)
    max_generations: int = Field(default_factory=lambda: settings.SIMULATION['CMAES_MAX_GENERATIONS'], ge=1)
    restarts: int = Field(default=1, ge=1)

    def strategy(self, seed: int) -> CmaesConfig:
        return CmaesConfig(
            population=self.population,
            sigma0=self.sigma0,
            max_generations=self.max_generations,
            seed=seed,
        )


class RunSection(_Section):
    out: str = Field(default_factory=lambda: str(settings.RESULTS_DIR))
    workers: int = Field(default_factory=lambda: settings.DEFAULT_WORKERS, ge=1)


class ExperimentConfig(_Section):
    """One optimization sweep over (n, m, seed)."""

    configuration: ConfigurationSection = Field(default_factory=ConfigurationSection)
    circuit: CircuitSection = Field(default_factory=CircuitSection)
    noise: NoiseSection = Field(default_factory=NoiseSection)
    cmaes: CmaesSection = Field(default_factory=CmaesSection)
    run: RunSection = Field(default_factory=RunSection)

    def canonical(self) -> dict:
        """Everything that affects results; the run table does not."""
        return self.model_dump(mode='json', exclude={'run'})

    def config_hash(self) -> str:
        return config_hash(self.canonical())


def config_hash(document: dict) -> str:
    payload = json.dumps(document, sort_keys=True, separators=(',', ':'))
    return hashlib.sha256(payload.encode()).hexdigest()


class Instance(BaseModel):
    model_config = ConfigDict(frozen=True)

    n: int
    m: int
    seed: int

    def key(self, config_hash_value: str) -> str:
        payload = f'{config_hash_value}:{self.n}:{self.m}:{self.seed}'
        return hashlib.sha256(payload.encode()).hexdigest()


class InstanceMetrics(BaseModel):
    cfi: float
    fdd_t: float
    f_dd_hz: float
    entropies: list[float]
    cluster_sizes: list[int]
    xi_squared: Optional[float] = None      # undefined when <J_x> vanishes


class InstanceResult(BaseModel):
    """Everything recorded for one (n, m, seed) instance."""

    config_hash: str
    instance_key: str
    config: dict
    n: int
    m: int
    seed: int
    status: str = 'ok'
    configuration: Optional[dict] = None
    record: Optional[OptimizationRecord] = None
    metrics: Optional[InstanceMetrics] = None
    error: Optional[dict] = None
    version: str
    created_at: datetime

    @model_validator(mode='after')
    def check_invariants(self) -> 'InstanceResult':
        if self.status not in ('ok', 'failed'):
            raise ValueError(f'unknown status {self.status!r}')
        if self.status == 'ok' and (self.record is None or self.metrics is None):
            raise ValueError('completed instances carry a record and metrics')
        if config_hash(self.config) != self.config_hash:
            raise ValueError('config hash does not match the embedded config')
        return self

    @property
    def ok(self) -> bool:
        return self.status == 'ok'

    def aggregate_row(self) -> dict:
        return {
            'n': self.n,
            'm': self.m,
            'seed': self.seed,
            'cfi': self.metrics.cfi,
            'fdd_T': self.metrics.fdd_t,
            'generations': self.record.generations,
            'wall_s': self.record.wall_time,
        }


class RunSummary(BaseModel):
    config_hash: str
    completed: int = 0
    skipped: int = 0
    failed: int = 0
    results: list[InstanceResult] = Field(default_factory=list)
