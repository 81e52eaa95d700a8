"""
Engine services.
"""
from engine.services.gates import GateService
from engine.services.entangler import EntanglerService
from engine.services.master_equation import MasterEquationService

__all__ = [
    'GateService',
    'EntanglerService',
    'MasterEquationService',
]
