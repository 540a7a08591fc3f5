"""
Distribution du nombre de leaders survivants à l'horizon floor(21 n ln n).

La probabilité de finir avec exactement i leaders est bornée par 2^(1-i),
et au moins un leader survit toujours.
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Optional

import numpy as np
import pandas as pd

from engine.scheduler import RandomSource
from engine.simulation import run
from models.pll import PLLProtocol, params_from_m
from utils.validators import InvalidParameterError, Validator

from .statistics import slack_allowance, within_bound
from .trials import run_trials, trial_seeds

logger = logging.getLogger(__name__)

TAIL_FROM = 5


def survivor_horizon(n: int) -> int:
    Validator.validate_population(n)
    return math.floor(21 * n * math.log(n))


def survivor_bound(i: int) -> float:
    """Borne 2^(1-i) sur Pr(exactement i leaders); zéro leader est impossible"""
    if i <= 0:
        return 0.0
    return min(1.0, 2.0 ** (1 - i))


def competition_game(leaders: int, rng: RandomSource) -> int:
    """
    Jeu idéal d'élimination: chaque joueur lance une pièce jusqu'au premier
    face; les joueurs au nombre de piles maximal survivent.
    """
    Validator.validate_positive(leaders, 'leaders')
    heads = rng.geometric(0.5, size=leaders) - 1
    return int(np.count_nonzero(heads == heads.max()))


@dataclass
class SurvivorHistogram:
    n: int
    m: int
    trials: int
    horizon_step: int
    counts: Dict[int, int]
    game_counts: Optional[Dict[int, int]] = None

    def __post_init__(self):
        if sum(self.counts.values()) != self.trials:
            raise InvalidParameterError("L'histogramme ne totalise pas le nombre d'essais")

    def fraction(self, i: int) -> float:
        return self.counts.get(i, 0) / self.trials

    def tail_fraction(self, start: int = TAIL_FROM) -> float:
        return sum(c for i, c in self.counts.items() if i >= start) / self.trials

    def tail_passes(self, start: int = TAIL_FROM) -> bool:
        bound = sum(survivor_bound(i) for i in range(start, start + 64))
        return within_bound(self.tail_fraction(start), bound, self.trials)

    def rows(self) -> pd.DataFrame:
        """Table (i, count, empirical_p, bound, pass) de i = 0 au maximum observé"""
        top = max(max(self.counts, default=0), 4)
        records = []
        for i in range(top + 1):
            count = self.counts.get(i, 0)
            empirical = count / self.trials
            bound = survivor_bound(i)
            passed = count == 0 if i == 0 else within_bound(empirical, bound, self.trials)
            record = {'i': i, 'count': count, 'empirical_p': empirical,
                      'bound': bound, 'pass': passed}
            if self.game_counts is not None:
                record['game_p'] = self.game_counts.get(i, 0) / self.trials
            records.append(record)
        return pd.DataFrame.from_records(records)

    @property
    def passed(self) -> bool:
        return bool(self.rows()['pass'].all()) and self.tail_passes()

    def aggregates(self) -> dict:
        return {
            'n': self.n,
            'm': self.m,
            'trials': self.trials,
            'horizon_step': self.horizon_step,
            'tail_from': TAIL_FROM,
            'tail_fraction': self.tail_fraction(),
            'tail_bound': 2.0 ** (2 - TAIL_FROM),
            'slack': slack_allowance(0.5, self.trials),
            'passed': self.passed,
        }


def _survivors_worker(task) -> int:
    m, n, seed, horizon = task
    protocol = PLLProtocol(params_from_m(m))
    result = run(protocol, n, RandomSource(seed), max_steps=horizon)
    return result.configuration.leader_count


def _game_worker(task) -> int:
    players, seed = task
    return competition_game(players, RandomSource(seed))


def survivor_histogram(n: int,
                       m: int,
                       trials: int,
                       seed: int,
                       jobs: int = 1,
                       with_game: bool = False) -> SurvivorHistogram:
    """
    Chaque essai joue exactement floor(21 n ln n) pas de P_LL puis compte les
    leaders. with_game ajoute la distribution du jeu idéal à n/2 joueurs.
    """
    Validator.validate_population(n)
    Validator.validate_m(m)
    Validator.validate_positive(trials, 'trials')
    horizon = survivor_horizon(n)
    seeds = trial_seeds(seed, trials)
    logger.info(f"Survivants: n={n}, m={m}, {trials} essais de {horizon} pas")
    leaders = run_trials(_survivors_worker, [(m, n, s, horizon) for s in seeds], jobs)
    counts: Dict[int, int] = {}
    for count in leaders:
        counts[count] = counts.get(count, 0) + 1
    if counts.get(0):
        logger.error(f"{counts[0]} essais sans aucun leader")

    game_counts = None
    if with_game:
        players = max(1, n // 2)
        outcomes: List[int] = run_trials(_game_worker, [(players, s) for s in seeds], jobs)
        game_counts = {}
        for count in outcomes:
            game_counts[count] = game_counts.get(count, 0) + 1
    return SurvivorHistogram(n, m, trials, horizon, dict(sorted(counts.items())), game_counts)
