"""
Variational preparation of metrological states in dipolar spin ensembles.
"""

__version__ = '1.0.0'
