"""
Noyau d'exécution des protocoles de population.

Un protocole fournit l'état initial, la fonction de transition sur une paire
ordonnée d'états et la fonction de sortie. Le moteur applique les interactions
tirées par l'ordonnanceur, une à la fois.
"""

import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Iterable, List, Optional, Sequence, Tuple

from engine.scheduler import InteractionEvent, RandomSource, pair_from_index
from utils.validators import InvalidParameterError, Validator

logger = logging.getLogger(__name__)

Observer = Callable[[int, InteractionEvent, Any, Any], None]
StopCondition = Callable[['Configuration'], bool]


class Output(str, Enum):
    LEADER = 'L'
    FOLLOWER = 'F'


class ProtocolSpec(ABC):
    """Interface d'un protocole de population P(Q, s_init, T, Y, pi_out)"""

    name = 'protocol'
    min_population = 2

    @abstractmethod
    def initial_state(self) -> Any:
        """État initial commun à tous les agents"""

    @abstractmethod
    def transition(self, initiator: Any, responder: Any) -> Tuple[Any, Any]:
        """Fonction de transition déterministe sur la paire ordonnée"""

    @abstractmethod
    def output(self, state: Any) -> Output:
        """Sortie L ou F d'un état"""

    def state_space(self) -> Optional[Iterable[Any]]:
        """Énumération finie des états, si disponible"""
        return None

    def epoch_of(self, state: Any) -> Optional[int]:
        """Phase courante d'un état (None si le protocole n'a pas d'époques)"""
        return None

    def is_leader(self, state: Any) -> bool:
        return self.output(state) is Output.LEADER

    def reduce_state(self, state: Any) -> Any:
        """Représentant d'un état pour l'exploration exhaustive: même sortie, mêmes transitions"""
        return state

    def relabelings(self) -> List[Callable[[Any], Any]]:
        """Renommages d'états qui préservent la sortie et commutent avec la transition"""
        return []

    def check_population(self, n: int) -> None:
        Validator.validate_population(n, self.min_population)


class Configuration:
    """Vecteur des états indexé par agent, avec le nombre de leaders en cache"""

    def __init__(self, states: Sequence[Any], protocol: ProtocolSpec, step: int = 0):
        self.states = list(states)
        self.protocol = protocol
        self.step = step
        self.leader_count = sum(1 for s in self.states if protocol.is_leader(s))

    @classmethod
    def initial(cls, protocol: ProtocolSpec, n: int) -> 'Configuration':
        protocol.check_population(n)
        return cls([protocol.initial_state()] * n, protocol)

    @property
    def n(self) -> int:
        return len(self.states)

    def outputs(self) -> Tuple[Output, ...]:
        return tuple(self.protocol.output(s) for s in self.states)

    def __repr__(self):
        return f"Configuration(n={self.n}, step={self.step}, leaders={self.leader_count})"


def single_leader(config: Configuration) -> bool:
    """Condition d'arrêt: exactement un agent de sortie L"""
    return config.leader_count == 1


def parallel_time(steps: int, n: int) -> float:
    """Temps parallèle: nombre de pas divisé par n"""
    Validator.validate_population(n, minimum=1)
    return steps / n


def default_max_steps(n: int) -> int:
    """Borne par défaut: 500 * n * max(1, ceil(log2 n))"""
    return 500 * n * max(1, math.ceil(math.log2(n))) if n > 1 else 500


def step(config: Configuration, event: InteractionEvent, protocol: ProtocolSpec) -> Configuration:
    """
    Applique une interaction. La configuration est modifiée en place: seuls les
    deux participants changent d'état, et le compteur de pas avance de un.
    """
    states = config.states
    u, v = event.initiator, event.responder
    if not (0 <= u < len(states) and 0 <= v < len(states)):
        raise IndexError(f"Agent hors population: ({u}, {v}) pour n={len(states)}")
    if u == v:
        raise IndexError(f"Un agent ne peut pas interagir avec lui-même: {u}")
    old_u, old_v = states[u], states[v]
    new_u, new_v = protocol.transition(old_u, old_v)
    states[u], states[v] = new_u, new_v
    config.leader_count += (protocol.is_leader(new_u) + protocol.is_leader(new_v)
                            - protocol.is_leader(old_u) - protocol.is_leader(old_v))
    config.step += 1
    return config


@dataclass
class RunResult:
    """Résultat d'une exécution: arrêt atteint ou délai dépassé"""
    stopped: bool
    steps: int
    configuration: Configuration
    trace: Optional[List[InteractionEvent]] = field(default=None, repr=False)

    @property
    def timed_out(self) -> bool:
        return not self.stopped

    @property
    def parallel_time(self) -> float:
        return parallel_time(self.steps, self.configuration.n)


def run(protocol: ProtocolSpec,
        n: int,
        rng: RandomSource,
        stop: Optional[StopCondition] = None,
        max_steps: Optional[int] = None,
        observers: Iterable[Observer] = (),
        record_trace: bool = False,
        configuration: Optional[Configuration] = None) -> RunResult:
    """
    Exécute le protocole jusqu'à ce que stop soit vrai ou que max_steps pas
    soient joués. La condition d'arrêt est évaluée avant le premier pas puis
    après chaque pas. Sans condition d'arrêt, l'exécution joue exactement
    max_steps pas.
    """
    protocol.check_population(n)
    if max_steps is None:
        max_steps = default_max_steps(n)
    if max_steps < 1:
        raise InvalidParameterError(f"max_steps doit être >= 1 (reçu {max_steps})")

    config = configuration if configuration is not None else Configuration.initial(protocol, n)
    if config.n != n:
        raise InvalidParameterError(f"Configuration de taille {config.n} pour n={n}")
    observers = list(observers)
    trace = [] if record_trace else None
    states = config.states

    if stop is not None and stop(config):
        return RunResult(True, config.step, config, trace)

    start = config.step
    for _ in range(max_steps):
        u, v = pair_from_index(rng.pair_index(n), n)
        event = InteractionEvent(u, v, config.step)
        step(config, event, protocol)
        if trace is not None:
            trace.append(event)
        for observer in observers:
            observer(config.step, event, states[u], states[v])
        if stop is not None and stop(config):
            return RunResult(True, config.step, config, trace)

    logger.debug(f"{protocol.name}: arrêt non atteint après {config.step - start} pas (n={n})")
    return RunResult(False, config.step, config, trace)
