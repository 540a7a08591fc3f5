"""
Nombre d'états par agent de P_LL en fonction de m.
"""

import logging
from typing import Iterable

import pandas as pd

from models.pll import params_from_m, state_count_breakdown
from utils.validators import InvalidParameterError

logger = logging.getLogger(__name__)

COLUMNS = ['m', 'states', 'initial', 'timer', 'quick', 'tournament', 'backup', 'ratio']


def count_states_report(m_values: Iterable[int]) -> pd.DataFrame:
    """
    Une ligne par m (dans l'ordre croissant): |Q|, contribution de chaque
    groupe, et rapport |Q(m)| / |Q(m')| avec la valeur précédente m'.
    """
    values = sorted(set(m_values))
    if not values:
        raise InvalidParameterError("Au moins une valeur de m est requise")
    records = []
    previous = None
    for m in values:
        breakdown = state_count_breakdown(params_from_m(m))
        total = breakdown['total']
        logger.debug(f"m={m}: {total} états")
        records.append({
            'm': m,
            'states': total,
            'initial': breakdown['initial'],
            'timer': breakdown['timer'],
            'quick': breakdown['quick'],
            'tournament': breakdown['tournament'],
            'backup': breakdown['backup'],
            'ratio': total / previous if previous else None,
        })
        previous = total
    return pd.DataFrame.from_records(records, columns=COLUMNS)


def growth_passes(report: pd.DataFrame, max_ratio: float = 2.5) -> bool:
    """Croissance stricte et rapport borné entre valeurs successives"""
    states = report['states']
    ratios = report['ratio'].dropna()
    return bool(states.is_monotonic_increasing and states.is_unique and (ratios <= max_ratio).all())
