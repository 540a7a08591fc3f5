"""
Équité des pièces de la variante symétrique.

Un leader ne lit une pièce que chez un suiveur F0 (pile) ou F1 (face). Comme
F0 et F1 sont toujours en nombre égal, la fréquence de pile conditionnée aux
lectures effectives doit valoir 1/2.
"""

import logging
from dataclasses import dataclass
from typing import Optional

from engine.scheduler import RandomSource, derive_trial_seed
from engine.simulation import run, single_leader
from models.pll import params_from_m
from models.pll_sym import SymmetricPLLProtocol
from utils.validators import Validator

from .statistics import FairnessResult, fairness_test

logger = logging.getLogger(__name__)


class CoinTally(SymmetricPLLProtocol):
    """Variante symétrique qui compte les lectures de pièce des leaders"""

    def __init__(self, params):
        super().__init__(params)
        self.heads = 0
        self.tails = 0
        self.skipped = 0

    def _coin(self, a, i):
        heads = super()._coin(a, i)
        if heads is True:
            self.heads += 1
        elif heads is False:
            self.tails += 1
        else:
            self.skipped += 1
        return heads

    @property
    def flips(self) -> int:
        return self.heads + self.tails


@dataclass
class CoinFairnessReport:
    n: int
    m: int
    trials: int
    skipped: int
    result: Optional[FairnessResult]

    @property
    def passed(self) -> bool:
        return self.result is not None and self.result.within_three_sigma

    def to_row(self) -> dict:
        result = self.result
        return {
            'n': self.n,
            'm': self.m,
            'trials': self.trials,
            'flips': result.flips if result else 0,
            'heads': result.heads if result else 0,
            'frequency': result.frequency if result else None,
            'sigma': result.sigma if result else None,
            'p_value': result.p_value if result else None,
            'skipped': self.skipped,
            'pass': self.passed,
        }


def coin_fairness(n: int,
                  m: int,
                  seed: int,
                  max_steps: Optional[int] = None,
                  min_flips: int = 100_000,
                  max_trials: int = 10_000) -> CoinFairnessReport:
    """
    Enchaîne des essais de pll-sym jusqu'à la convergence, avec des graines
    dérivées de seed, jusqu'à cumuler min_flips lectures effectives.
    """
    Validator.validate_positive(min_flips, 'min_flips')
    Validator.validate_positive(max_trials, 'max_trials')
    protocol = CoinTally(params_from_m(m))
    protocol.check_population(n)
    trials = 0
    while protocol.flips < min_flips and trials < max_trials:
        run(protocol, n, RandomSource(derive_trial_seed(seed, trials)),
            stop=single_leader, max_steps=max_steps)
        trials += 1
    if protocol.flips < min_flips:
        logger.warning(f"Seulement {protocol.flips} lectures de pièce après {trials} essais")
    logger.info(f"Pièces: {protocol.heads} piles sur {protocol.flips} lectures ({trials} essais)")
    result = fairness_test(protocol.heads, protocol.flips) if protocol.flips else None
    return CoinFairnessReport(n, m, trials, protocol.skipped, result)
