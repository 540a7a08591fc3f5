"""
Observateurs de pas branchés sur engine.simulation.run.

Le moteur ne transmet que les nouveaux états des deux participants; les
observateurs qui ont besoin des anciens états tiennent leur propre copie du
vecteur de configuration.
"""

import logging
import math
from collections import Counter
from typing import Dict, List, Optional, Tuple

from engine.scheduler import InteractionEvent
from engine.simulation import Configuration, ProtocolSpec
from models.baselines import BaselineProtocol
from models.pll import LAST_EPOCH, PLLProtocol, Status
from models.pll_sym import Coin, SymmetricPLLProtocol

logger = logging.getLogger(__name__)


class InvariantViolation(AssertionError):
    """Invariant d'exécution violé pendant une simulation"""
    pass


class MirrorObserver:
    """Base des observateurs qui comparent ancien et nouvel état"""

    def __init__(self, config: Configuration):
        self.states = list(config.states)

    def __call__(self, step: int, event: InteractionEvent, new_u, new_v) -> None:
        u, v = event.initiator, event.responder
        old_u, old_v = self.states[u], self.states[v]
        self.on_step(step, event, (old_u, old_v), (new_u, new_v))
        self.states[u] = new_u
        self.states[v] = new_v

    def on_step(self, step: int, event: InteractionEvent, old: Tuple, new: Tuple) -> None:
        raise NotImplementedError


class InvariantObserver(MirrorObserver):
    """
    Vérifie à chaque pas les invariants des protocoles:

    - le nombre de leaders ne croît jamais et ne tombe jamais à zéro
      (pour la référence: il baisse de un exactement quand deux leaders se rencontrent)
    - un statut A ou B ne change plus
    - l'époque ne décroît pas, et les deux participants finissent dans la même époque
    - variables de groupe cohérentes et bornes respectées
    - une fois tous les statuts attribués: |A| >= n/2, |suiveurs| >= n/2, |B| >= 1
    - variante symétrique: autant de pièces F0 que de F1
    """

    def __init__(self, protocol: ProtocolSpec, config: Configuration, strict: bool = True):
        super().__init__(config)
        self.protocol = protocol
        self.strict = strict
        self.violations: List[str] = []
        self.steps_checked = 0
        self.n = config.n
        self.leaders = sum(1 for s in self.states if protocol.is_leader(s))
        self.is_pll = isinstance(protocol, PLLProtocol)
        self.is_symmetric = isinstance(protocol, SymmetricPLLProtocol)
        self.is_baseline = isinstance(protocol, BaselineProtocol)
        self.status_counts: Dict[Status, int] = {status: 0 for status in Status}
        self.epoch_counts: Counter = Counter()
        self.coin_balance = 0
        if self.is_pll:
            for state in self.states:
                self.status_counts[state.status] += 1
                self.epoch_counts[state.epoch] += 1
        if self.is_symmetric:
            for state in self.states:
                self.coin_balance += self._coin_weight(state)
        self._check_leaders(0)

    @staticmethod
    def _coin_weight(state) -> int:
        if state.coin is Coin.F0:
            return 1
        if state.coin is Coin.F1:
            return -1
        return 0

    @property
    def highest_epoch(self) -> int:
        """Plus grande époque présente (0 pour un protocole sans époques)"""
        return max((epoch for epoch, count in self.epoch_counts.items() if count > 0), default=0)

    def reached_last_epoch(self, config: Configuration) -> bool:
        """Condition d'arrêt: tous les agents sont dans la phase de secours"""
        return self.epoch_counts[LAST_EPOCH] == self.n

    def _fail(self, step: int, message: str) -> None:
        message = f"pas {step}: {message}"
        self.violations.append(message)
        if self.strict:
            raise InvariantViolation(message)
        logger.error(f"Invariant violé, {message}")

    def _check_leaders(self, step: int) -> None:
        if self.leaders < 1:
            self._fail(step, "plus aucun leader")

    def on_step(self, step, event, old, new):
        self.steps_checked += 1
        protocol = self.protocol
        before = sum(protocol.is_leader(s) for s in old)
        after = sum(protocol.is_leader(s) for s in new)
        if after > before:
            self._fail(step, f"le nombre de leaders augmente ({before} -> {after} dans la paire)")
        if self.is_baseline:
            expected = 1 if before == 2 else before
            if after != expected:
                self._fail(step, f"référence: {before} leaders donnent {after}")
        self.leaders += after - before
        self._check_leaders(step)
        if self.is_pll:
            self._check_pll(step, old, new)

    def _check_pll(self, step, old, new):
        protocol = self.protocol
        initial = protocol.initial_statuses
        for before, after in zip(old, new):
            if before.status not in initial and after.status is not before.status:
                self._fail(step, f"statut {before.status.value} devenu {after.status.value}")
            if after.epoch < before.epoch:
                self._fail(step, f"époque {before.epoch} redescendue à {after.epoch}")
            for problem in protocol.check_state(after):
                self._fail(step, problem)
            self.status_counts[before.status] -= 1
            self.status_counts[after.status] += 1
            self.epoch_counts[before.epoch] -= 1
            self.epoch_counts[after.epoch] += 1
            if self.is_symmetric:
                self.coin_balance += self._coin_weight(after) - self._coin_weight(before)
        if new[0].epoch != new[1].epoch:
            self._fail(step, f"époques différentes après la fusion: {new[0].epoch} et {new[1].epoch}")
        if self.is_symmetric and self.coin_balance != 0:
            self._fail(step, f"déséquilibre F0/F1 = {self.coin_balance}")
        if sum(self.status_counts[s] for s in initial) == 0:
            counts = self.status_counts
            followers = self.n - self.leaders
            if 2 * counts[Status.A] < self.n or 2 * followers < self.n or counts[Status.B] < 1:
                self._fail(step, f"répartition invalide: |A|={counts[Status.A]}, "
                                 f"|B|={counts[Status.B]}, suiveurs={followers}")


class TrajectoryRecorder:
    """
    Échantillonne le nombre de leaders tous les interval pas et note le
    premier pas où chaque époque est atteinte.
    """

    def __init__(self, protocol: ProtocolSpec, config: Configuration, interval: Optional[int] = None):
        self.protocol = protocol
        self.config = config
        self.interval = interval if interval is not None else max(1, math.ceil(config.n / 4))
        self.trajectory: List[Tuple[int, int]] = [(config.step, config.leader_count)]
        self.epoch_entries: Dict[int, int] = {}
        for state in config.states:
            epoch = protocol.epoch_of(state)
            if epoch is not None and epoch not in self.epoch_entries:
                self.epoch_entries[epoch] = config.step

    def __call__(self, step, event, new_u, new_v):
        if step % self.interval == 0:
            self.trajectory.append((step, self.config.leader_count))
        epoch = self.protocol.epoch_of(new_u)
        if epoch is not None and epoch not in self.epoch_entries:
            self.epoch_entries[epoch] = step

    def mark(self) -> None:
        """Ajoute un échantillon au pas courant s'il n'est pas déjà présent"""
        if self.trajectory[-1][0] != self.config.step:
            self.trajectory.append((self.config.step, self.config.leader_count))


class LeaderWatch:
    """Retient les nombres de leaders extrêmes observés"""

    def __init__(self, config: Configuration):
        self.config = config
        self.lowest = config.leader_count
        self.highest = config.leader_count

    def __call__(self, step, event, new_u, new_v):
        count = self.config.leader_count
        if count < self.lowest:
            self.lowest = count
        if count > self.highest:
            self.highest = count
