"""
Prédicats de configuration de P_LL et suivi de leur première occurrence.

    color(i)   tous les agents ont la couleur i
    start(i)   un agent au moins a la couleur i, aucun minuteur de couleur i
               n'a un compteur non nul, et aucun agent n'a la couleur i+1 (mod 3)
    b_start    color(0), tous les agents en époque 4, et level_b <= 1 pour
               tous les candidats
"""

import logging
import re
from dataclasses import dataclass
from typing import Iterable, Optional

from engine.scheduler import RandomSource
from engine.simulation import Configuration, run
from models.pll import LAST_EPOCH, BackupVars, PLLProtocol, Status, Timer
from utils.validators import InvalidParameterError

from .observers import MirrorObserver

logger = logging.getLogger(__name__)


class PredicateCounts:
    """Compteurs agrégés d'une configuration, mis à jour agent par agent"""

    def __init__(self, states: Iterable):
        self.n = 0
        self.colors = [0, 0, 0]
        self.busy_timers = [0, 0, 0]
        self.last_epoch = 0
        self.high_backup = 0
        for state in states:
            self.add(state)

    def _update(self, state, delta: int) -> None:
        common, group = state.common, state.group
        self.n += delta
        self.colors[common.color] += delta
        if common.status is Status.B and type(group) is Timer and group.count != 0:
            self.busy_timers[common.color] += delta
        if common.epoch == LAST_EPOCH:
            self.last_epoch += delta
        if common.status is Status.A and type(group) is BackupVars and group.level_b > 1:
            self.high_backup += delta

    def add(self, state) -> None:
        self._update(state, 1)

    def remove(self, state) -> None:
        self._update(state, -1)

    def is_color_uniform(self, i: int) -> bool:
        return self.colors[i] == self.n

    def is_start(self, i: int) -> bool:
        return (self.colors[i] > 0 and self.busy_timers[i] == 0
                and self.colors[(i + 1) % 3] == 0)

    @property
    def is_b_start(self) -> bool:
        return self.is_color_uniform(0) and self.last_epoch == self.n and self.high_backup == 0


def config_predicates(config: Configuration) -> PredicateCounts:
    """Prédicats d'une configuration de pll ou pll-sym"""
    if not isinstance(config.protocol, PLLProtocol):
        raise InvalidParameterError(f"Prédicats définis pour pll et pll-sym seulement, "
                                    f"pas pour {config.protocol.name}")
    return PredicateCounts(config.states)


@dataclass(frozen=True)
class PredicateTarget:
    """Cible de suivi: 'color:i', 'start:i' ou 'b_start'"""
    kind: str
    index: int = 0

    @classmethod
    def parse(cls, text: str) -> 'PredicateTarget':
        text = text.strip().lower()
        if text in ('b_start', 'b-start', 'bstart'):
            return cls('b_start')
        match = re.fullmatch(r'(color|start)[:(]([0-2])\)?', text)
        if not match:
            raise InvalidParameterError(f"Prédicat inconnu: {text} (attendu color:i, start:i ou b_start)")
        return cls(match.group(1), int(match.group(2)))

    def holds(self, counts: PredicateCounts) -> bool:
        if self.kind == 'b_start':
            return counts.is_b_start
        if self.kind == 'color':
            return counts.is_color_uniform(self.index)
        return counts.is_start(self.index)

    def __str__(self):
        return 'b_start' if self.kind == 'b_start' else f"{self.kind}:{self.index}"


class PredicateTracker(MirrorObserver):
    """Maintient les compteurs de prédicats à chaque pas"""

    def __init__(self, config: Configuration):
        super().__init__(config)
        self.counts = PredicateCounts(self.states)

    def on_step(self, step, event, old, new):
        for state in old:
            self.counts.remove(state)
        for state in new:
            self.counts.add(state)


def first_visit(protocol: PLLProtocol,
                n: int,
                seed: int,
                target,
                max_steps: Optional[int] = None) -> Optional[int]:
    """
    Premier pas où la configuration satisfait la cible, vérifié à chaque pas.
    Retourne None si la cible n'est pas atteinte dans max_steps pas.
    """
    if isinstance(target, str):
        target = PredicateTarget.parse(target)
    config = Configuration.initial(protocol, n)
    config_predicates(config)
    tracker = PredicateTracker(config)
    result = run(protocol, n, RandomSource(seed),
                 stop=lambda _: target.holds(tracker.counts),
                 max_steps=max_steps, observers=[tracker], configuration=config)
    if not result.stopped:
        logger.debug(f"{target} non atteint en {result.steps} pas (n={n}, graine {seed})")
        return None
    return result.steps
