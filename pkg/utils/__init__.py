"""
Module des utilitaires
"""

from .validators import Validator, ValidationError, InvalidPopulationError, InvalidParameterError

__all__ = ['Validator', 'ValidationError', 'InvalidPopulationError', 'InvalidParameterError']
