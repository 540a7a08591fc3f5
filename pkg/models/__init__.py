"""
Module des modèles de protocoles
"""

import logging
from typing import Optional

from utils.validators import InvalidParameterError, Validator
from .baselines import BaselineProtocol, BaselineState
from .pll import Params, PLLProtocol, PLLState, Status, params_from_m
from .pll_sym import Coin, SymmetricPLLProtocol, SymState

logger = logging.getLogger(__name__)

# Dictionnaire des protocoles
PROTOCOLS = {
    'pll': PLLProtocol,
    'pll-sym': SymmetricPLLProtocol,
    'baseline': BaselineProtocol,
}


def build_protocol(name: str, n: Optional[int] = None, m: Optional[int] = None):
    """
    Construit un protocole par son nom. Pour pll et pll-sym, m vaut par défaut
    max(2, ceil(log2 n)); un m explicite plus petit que log2 n est accepté avec
    un avertissement.
    """
    if name not in PROTOCOLS:
        raise InvalidParameterError(f"Protocole inconnu: {name} (choix: {', '.join(PROTOCOLS)})")
    protocol_class = PROTOCOLS[name]
    if protocol_class is BaselineProtocol:
        protocol = BaselineProtocol()
    else:
        if m is None:
            if n is None:
                raise InvalidParameterError(f"{name}: m ou n est requis")
            m = Validator.recommended_m(n)
        elif n is not None:
            Validator.check_m_covers(m, n)
        protocol = protocol_class(params_from_m(m))
    if n is not None:
        protocol.check_population(n)
    return protocol


__all__ = [
    'PROTOCOLS', 'build_protocol',
    'BaselineProtocol', 'BaselineState',
    'Params', 'PLLProtocol', 'PLLState', 'Status', 'params_from_m',
    'Coin', 'SymmetricPLLProtocol', 'SymState',
]
