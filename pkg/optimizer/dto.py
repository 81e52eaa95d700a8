"""
Optimizer Pydantic schemas (DTO).
"""
import math
from typing import Optional

from django.conf import settings
from pydantic import BaseModel, ConfigDict, Field, model_validator

Bound = tuple[Optional[float], Optional[float]]


def _simulation(key: str):
    return lambda: settings.SIMULATION[key]


class CmaesConfig(BaseModel):
    """
    CMA-ES settings.

    Bounded coordinates are searched in units of their box width and
    repaired by reflection; unbounded coordinates (None bounds) in units of
    unbounded_scale.
    """

    model_config = ConfigDict(frozen=True)

    population: Optional[int] = Field(default=None, ge=4)
    sigma0: float = Field(default_factory=_simulation('CMAES_SIGMA0'), gt=0)
    max_generations: int = Field(default_factory=_simulation('CMAES_MAX_GENERATIONS'), ge=1)
    stagnation_generations: int = Field(default_factory=_simulation('CMAES_STAGNATION_GENERATIONS'), ge=1)
    stagnation_tol: float = Field(default_factory=_simulation('CMAES_STAGNATION_TOL'), ge=0)
    tol_x: float = Field(default_factory=_simulation('CMAES_TOL_X'), ge=0)
    max_resamples: int = Field(default_factory=_simulation('CMAES_MAX_RESAMPLES'), ge=0)
    target: Optional[float] = None
    seed: Optional[int] = Field(default=None, ge=0, lt=2**64)
    bounds: Optional[tuple[Bound, ...]] = None
    unbounded_scale: float = Field(default=1.0, gt=0)

    @model_validator(mode='after')
    def check_invariants(self) -> 'CmaesConfig':
        for i, (lo, hi) in enumerate(self.bounds or ()):
            if (lo is None) != (hi is None):
                raise ValueError(f'coordinate {i}: give both bounds or neither')
            if lo is not None and not lo < hi:
                raise ValueError(f'coordinate {i}: lower bound {lo} is not below {hi}')
        return self

    def population_size(self, dim: int) -> int:
        """lambda = 4 + floor(3 ln d) unless set explicitly."""
        if self.population is not None:
            return self.population
        return 4 + int(3 * math.log(dim))


class GenerationStats(BaseModel):
    generation: int
    best_cost: float        # best so far
    mean_cost: float        # over this generation's population
    sigma: float


class OptimizationRecord(BaseModel):
    """Trace and outcome of one optimizer run."""

    history: tuple[GenerationStats, ...] = ()
    theta: tuple[float, ...]
    best_cost: float
    evaluations: int
    generations: int
    seed: Optional[int] = None
    wall_time: float = 0.0
    termination: str = ''
    restart: int = 0

    # filled in by the entangler and fidelity drivers
    m: Optional[int] = None
    tau_bound: Optional[float] = None
    f_dd_hz: Optional[float] = None
    score: Optional[float] = None   # CFI or fidelity, larger is better

    @model_validator(mode='after')
    def check_invariants(self) -> 'OptimizationRecord':
        costs = [stats.best_cost for stats in self.history]
        if any(b > a for a, b in zip(costs, costs[1:])):
            raise ValueError('best-cost trace must be non-increasing')
        return self
