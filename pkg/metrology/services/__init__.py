"""
Metrology services.
"""
from metrology.services.measurement import MeasurementService
from metrology.services.fisher import FisherInformationService
from metrology.services.ramsey import RamseyService
from metrology.services.estimation import EstimationService

__all__ = [
    'MeasurementService',
    'FisherInformationService',
    'RamseyService',
    'EstimationService',
]
