"""
Outils statistiques partagés par les vérifications Monte-Carlo.
"""

import math
from dataclasses import dataclass
from typing import Dict, Iterable, Optional

import numpy as np
from scipy import stats

from engine.scheduler import RandomSource, pair_from_index
from utils.validators import Validator

MIN_SLACK = 0.05


def slack_allowance(p: float, trials: int) -> float:
    """Marge tolérée: max(0.05, 3 * sqrt(p(1-p)/trials))"""
    Validator.validate_positive(trials, 'trials')
    p = min(max(p, 0.0), 1.0)
    return max(MIN_SLACK, 3 * math.sqrt(p * (1 - p) / trials))


def within_bound(empirical: float, bound: float, trials: int) -> bool:
    return empirical <= bound + slack_allowance(bound, trials)


def summarize(values: Iterable[float]) -> Dict[str, Optional[float]]:
    """Moyenne, médiane et 95e centile (None si aucune valeur)"""
    data = np.asarray(list(values), dtype=float)
    if data.size == 0:
        return {'mean': None, 'median': None, 'p95': None}
    return {
        'mean': float(np.mean(data)),
        'median': float(np.median(data)),
        'p95': float(np.percentile(data, 95)),
    }


@dataclass
class FairnessResult:
    flips: int
    heads: int
    frequency: float
    sigma: float
    p_value: float

    @property
    def within_three_sigma(self) -> bool:
        return abs(self.frequency - 0.5) <= 3 * self.sigma


def fairness_test(heads: int, flips: int) -> FairnessResult:
    """Fréquence de pile comparée à 1/2 (écart-type et test binomial exact)"""
    Validator.validate_positive(flips, 'flips')
    frequency = heads / flips
    sigma = math.sqrt(0.25 / flips)
    p_value = float(stats.binomtest(heads, flips, 0.5).pvalue)
    return FairnessResult(flips, heads, frequency, sigma, p_value)


@dataclass
class UniformityResult:
    n: int
    draws: int
    counts: np.ndarray
    chi_square: float
    p_value: float
    max_z: float


def scheduler_uniformity(n: int, draws: int, seed: int) -> UniformityResult:
    """Test du khi-deux de l'ordonnanceur sur les n(n-1) paires ordonnées"""
    Validator.validate_population(n)
    Validator.validate_positive(draws, 'draws')
    rng = RandomSource(seed)
    pairs = n * (n - 1)
    counts = np.zeros((n, n), dtype=np.int64)
    for _ in range(draws):
        u, v = pair_from_index(rng.pair_index(n), n)
        counts[u, v] += 1
    observed = counts[~np.eye(n, dtype=bool)]
    chi_square, p_value = stats.chisquare(observed)
    expected = draws / pairs
    sd = math.sqrt(draws * (1 / pairs) * (1 - 1 / pairs))
    max_z = float(np.max(np.abs(observed - expected)) / sd)
    return UniformityResult(n, draws, counts, float(chi_square), float(p_value), max_z)
