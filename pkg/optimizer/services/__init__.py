"""
Optimizer services.
"""
from optimizer.services.cmaes import CmaesService
from optimizer.services.costs import EntanglerOptimizationService

__all__ = [
    'CmaesService',
    'EntanglerOptimizationService',
]
