"""
Ordonnanceur uniformément aléatoire.

Chaque pas tire une paire ordonnée (initiateur, répondeur) uniformément parmi
les n(n-1) paires ordonnées d'agents distincts. Le générateur est PCG64 de
numpy, initialisé par une graine 64 bits: une même graine redonne exactement
la même suite d'interactions.
"""

import logging
from typing import List, NamedTuple

import numpy as np

from utils.validators import Validator

logger = logging.getLogger(__name__)


class InteractionEvent(NamedTuple):
    """Paire ordonnée tirée par l'ordonnanceur"""
    initiator: int
    responder: int
    step: int


def pair_from_index(index: int, n: int) -> tuple:
    """Décode un indice de [0, n(n-1)) en paire ordonnée (u, v) avec u != v"""
    initiator, offset = divmod(index, n - 1)
    responder = offset if offset < initiator else offset + 1
    return initiator, responder


def derive_trial_seed(master_seed: int, trial_index: int) -> int:
    """Graine 64 bits indépendante pour l'essai trial_index"""
    Validator.validate_seed(master_seed)
    Validator.validate_non_negative(trial_index, 'trial_index')
    sequence = np.random.SeedSequence([master_seed, trial_index])
    return int(sequence.generate_state(1, dtype=np.uint64)[0])


class RandomSource:
    """Source pseudo-aléatoire déterministe (PCG64) pour l'ordonnanceur"""

    BATCH_SIZE = 4096

    def __init__(self, seed: int):
        Validator.validate_seed(seed)
        self.seed = seed
        self._generator = np.random.Generator(np.random.PCG64(seed))
        self._buffer: List[int] = []
        self._position = 0
        self._bound = None

    @classmethod
    def for_trial(cls, master_seed: int, trial_index: int) -> 'RandomSource':
        return cls(derive_trial_seed(master_seed, trial_index))

    def pair_index(self, n: int) -> int:
        """Entier uniforme dans [0, n(n-1)); tirage par lots, sans biais de modulo"""
        bound = n * (n - 1)
        if bound != self._bound or self._position >= len(self._buffer):
            # Generator.integers est exact (rejet interne), le lot ne change pas la suite
            self._buffer = self._generator.integers(0, bound, size=self.BATCH_SIZE).tolist()
            self._position = 0
            self._bound = bound
        value = self._buffer[self._position]
        self._position += 1
        return value

    def geometric(self, p: float, size: int) -> np.ndarray:
        """Nombre d'essais jusqu'au premier succès, pour size joueurs"""
        return self._generator.geometric(p, size=size)


def draw_interaction(rng: RandomSource, n: int, step: int = 0) -> InteractionEvent:
    """Tire une interaction uniforme parmi les n(n-1) paires ordonnées"""
    Validator.validate_population(n)
    initiator, responder = pair_from_index(rng.pair_index(n), n)
    return InteractionEvent(initiator, responder, step)
