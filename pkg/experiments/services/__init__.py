"""
Experiments services.
"""
from experiments.services.store import ResultStore
from experiments.services.runner import ExperimentService
from experiments.services.reports import ReportService

__all__ = [
    'ResultStore',
    'ExperimentService',
    'ReportService',
]
