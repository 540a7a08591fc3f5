"""
Épidémie à sens unique sur une sous-population V' de taille n'.

V' = {0, ..., n'-1}, la source est l'agent 0. Un agent de V' devient infecté
lorsqu'il interagit (dans un rôle ou l'autre) avec un agent infecté de V';
l'infection n'est jamais perdue.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional

from engine.scheduler import RandomSource, pair_from_index
from utils.validators import InvalidParameterError, Validator

logger = logging.getLogger(__name__)


@dataclass
class EpidemicState:
    subset_size: int
    infected: List[bool]
    infected_count: int = 1
    source: int = 0
    completion_step: Optional[int] = None

    @classmethod
    def start(cls, n: int, subset_size: int) -> 'EpidemicState':
        infected = [False] * n
        infected[0] = True
        state = cls(subset_size, infected)
        if subset_size == 1:
            state.completion_step = 0
        return state

    @property
    def complete(self) -> bool:
        return self.infected_count == self.subset_size

    def interact(self, u: int, v: int, step: int) -> None:
        """Applique l'interaction (u, v) jouée au pas step (compté à partir de 1)"""
        if u >= self.subset_size or v >= self.subset_size:
            return
        infected = self.infected
        if infected[u] != infected[v]:
            infected[u] = infected[v] = True
            self.infected_count += 1
            if self.complete:
                self.completion_step = step


@dataclass
class EpidemicResult:
    completed: bool
    completion_step: Optional[int]
    steps: int


def simulate_epidemic(n: int, subset_size: int, rng: RandomSource, max_steps: int) -> EpidemicResult:
    """Premier pas où toute la sous-population est infectée, ou délai dépassé"""
    Validator.validate_population(n)
    Validator.validate_subset_size(n, subset_size)
    if max_steps < 0:
        raise InvalidParameterError(f"max_steps doit être >= 0 (reçu {max_steps})")

    state = EpidemicState.start(n, subset_size)
    if state.complete:
        return EpidemicResult(True, 0, 0)

    for current in range(1, max_steps + 1):
        u, v = pair_from_index(rng.pair_index(n), n)
        state.interact(u, v, current)
        if state.complete:
            return EpidemicResult(True, current, current)

    return EpidemicResult(False, None, max_steps)
