"""
Analysis services.
"""
from analysis.services.reference import ReferenceStateService
from analysis.services.entropy import EntropyService
from analysis.services.clusters import ClusterService
from analysis.services.wigner import WignerService
from analysis.services.squeezing import SqueezingService
from analysis.services.fidelity import CutoffService, FidelityService
from analysis.services.preparation_time import PreparationTimeService

__all__ = [
    'ReferenceStateService',
    'EntropyService',
    'ClusterService',
    'WignerService',
    'SqueezingService',
    'FidelityService',
    'CutoffService',
    'PreparationTimeService',
]
