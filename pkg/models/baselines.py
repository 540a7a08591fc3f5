"""
Élection de leader à deux états: quand deux leaders se rencontrent, le
répondeur devient suiveur. Sert de repli au module de secours et de point de
comparaison en Theta(n) temps parallèle.
"""

from dataclasses import dataclass
from typing import Iterator, Tuple

from engine.simulation import Output, ProtocolSpec


@dataclass(frozen=True, slots=True)
class BaselineState:
    leader: bool


LEADER = BaselineState(True)
FOLLOWER = BaselineState(False)


def baseline_transition(s0: BaselineState, s1: BaselineState) -> Tuple[BaselineState, BaselineState]:
    """(L, L) -> (L, F); toute autre paire est inchangée"""
    if s0.leader and s1.leader:
        return LEADER, FOLLOWER
    return s0, s1


class BaselineProtocol(ProtocolSpec):
    name = 'baseline'

    def initial_state(self) -> BaselineState:
        return LEADER

    def transition(self, s0, s1):
        return baseline_transition(s0, s1)

    def output(self, state) -> Output:
        return Output.LEADER if state.leader else Output.FOLLOWER

    def is_leader(self, state) -> bool:
        return state.leader

    def state_space(self) -> Iterator[BaselineState]:
        return iter((LEADER, FOLLOWER))

    def __repr__(self):
        return 'BaselineProtocol()'
