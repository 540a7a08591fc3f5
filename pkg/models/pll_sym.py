"""
Variante symétrique de P_LL: p = q implique p' = q'.

Les rôles initiateur/répondeur ne sont jamais lus. L'attribution de statut
passe par la danse X/Y, et les pièces sont portées par les suiveurs:

    J x J -> K x K      K x K -> J x J      J x K -> F0 x F1

Un leader qui rencontre un suiveur F0 lit pile, F1 lit face; J et K ne
donnent rien. Les pièces ne sont jamais consommées par la lecture.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, List, Optional, Tuple

from models.pll import (INITIAL_STATUSES, NO_EXTRA, Agent, CommonVars, GroupVars,
                        PLLProtocol, PLLState, Status)

logger = logging.getLogger(__name__)


class Coin(str, Enum):
    J = 'J'
    K = 'K'
    F0 = 'F0'
    F1 = 'F1'


COIN_MIX = {
    (Coin.J, Coin.J): (Coin.K, Coin.K),
    (Coin.K, Coin.K): (Coin.J, Coin.J),
    (Coin.J, Coin.K): (Coin.F0, Coin.F1),
    (Coin.K, Coin.J): (Coin.F1, Coin.F0),
}

COIN_READING = {Coin.F0: True, Coin.F1: False}


@dataclass(frozen=True, slots=True)
class SymState:
    common: CommonVars
    group: GroupVars
    coin: Optional[Coin] = None

    @property
    def leader(self) -> bool:
        return self.common.leader

    @property
    def status(self) -> Status:
        return self.common.status

    @property
    def epoch(self) -> int:
        return self.common.epoch

    def is_consistent(self) -> bool:
        if self.common.leader == (self.coin is not None):
            return False
        return PLLState(self.common, self.group).is_consistent()


class SymmetricPLLProtocol(PLLProtocol):
    """P_LL sans lecture des rôles; exige n >= 3"""

    name = 'pll-sym'
    min_population = 3
    initial_statuses = INITIAL_STATUSES + (Status.Y,)

    def initial_state(self) -> SymState:
        return SymState(CommonVars(True, False, Status.X, 1, 1, 0), NO_EXTRA)

    def _freeze(self, agent: Agent) -> SymState:
        return SymState(agent.common(), agent.group(), agent.coin)

    def _coin(self, a: List[Agent], i: int) -> Optional[bool]:
        return COIN_READING.get(a[1 - i].coin)

    def _demote(self, agent: Agent) -> None:
        if agent.leader:
            agent.leader = False
            agent.coin = Coin.J

    def relabelings(self) -> List:
        # le départage compare les couleurs absolues
        return []

    def _break_tie(self, a: List[Agent]) -> None:
        key0, key1 = a[0].sort_key(), a[1].sort_key()
        if key0 != key1:
            self._demote(a[0] if key0 < key1 else a[1])

    def _finish(self, a: List[Agent]) -> None:
        self._coin_mix(a)

    def _assign_status(self, a: List[Agent]) -> None:
        x0, x1 = a
        waiting0 = x0.status in self.initial_statuses
        waiting1 = x1.status in self.initial_statuses
        if waiting0 and waiting1:
            pair = (x0.status, x1.status)
            if pair == (Status.X, Status.X):
                x0.status = x1.status = Status.Y
            elif pair == (Status.Y, Status.Y):
                x0.status = x1.status = Status.X
            else:
                candidate, timer = (x0, x1) if x0.status is Status.X else (x1, x0)
                candidate.status, candidate.level_q, candidate.done = Status.A, 0, False
                timer.status, timer.count = Status.B, 0
                self._demote(timer)
        elif waiting0 != waiting1:
            self._make_late_candidate(x0 if waiting0 else x1)

    def _coin_mix(self, a: List[Agent]) -> None:
        x0, x1 = a
        if x0.leader or x1.leader:
            return
        mixed = COIN_MIX.get((x0.coin, x1.coin))
        if mixed is not None:
            x0.coin, x1.coin = mixed

    # Étapes publiques propres à la variante

    def sym_assign_status(self, s0, s1) -> Tuple:
        return self._apply(self._assign_status, s0, s1)

    def sym_coin_mix(self, s0, s1) -> Tuple:
        return self._apply(self._coin_mix, s0, s1)

    def sym_transition(self, s0, s1) -> Tuple:
        return self.transition(s0, s1)

    def state_space(self) -> Iterator[SymState]:
        for common, group in self._enumerate_variables():
            if common.leader:
                yield SymState(common, group)
            else:
                for coin in Coin:
                    yield SymState(common, group, coin)

    def check_state(self, state) -> List[str]:
        problems = super().check_state(state)
        if state.common.leader and state.coin is not None:
            problems.append(f"un leader porte la pièce {state.coin.value}")
        if not state.common.leader and state.coin is None:
            problems.append("suiveur sans pièce")
        return problems


def coin_balance(states) -> int:
    """|F0| - |F1| parmi les suiveurs (nul dans toute configuration atteignable)"""
    balance = 0
    for state in states:
        if state.coin is Coin.F0:
            balance += 1
        elif state.coin is Coin.F1:
            balance -= 1
    return balance


__all__ = ['Coin', 'SymState', 'SymmetricPLLProtocol', 'coin_balance']
