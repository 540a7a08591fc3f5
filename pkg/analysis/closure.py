"""
Vérification exhaustive de la fermeture d'une configuration.

Parcours en largeur de toutes les configurations atteignables par les n(n-1)
interactions possibles. La configuration de départ est sûre si aucune
interaction atteignable ne change la sortie d'un de ses deux participants:
c'est équivalent à ce que toutes les configurations atteignables aient le
même vecteur de sorties.

Réductions exactes appliquées:

- les agents sont anonymes: une configuration est un multiensemble d'états;
- chaque état est remplacé par le représentant que donne
  protocol.reduce_state (même sortie, mêmes transitions);
- les renommages de protocol.relabelings commutent avec la transition: une
  configuration et ses images sont explorées une seule fois.

Les états sont numérotés à la volée et une configuration est codée par un
seul entier (identifiants triés, ID_BITS bits chacun).
"""

import logging
from collections import deque
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Set, Tuple

from engine.scheduler import RandomSource
from engine.simulation import Configuration, ProtocolSpec, run, single_leader
from utils.validators import InvalidParameterError, Validator

logger = logging.getLogger(__name__)

DEFAULT_MAX_CONFIGS = 2_000_000
ID_BITS = 20
ID_MASK = (1 << ID_BITS) - 1


@dataclass
class ClosureResult:
    explored: int
    safe: bool
    conclusive: bool = True
    counterexample: Optional[List[Tuple[int, int]]] = None

    @property
    def verdict(self) -> str:
        if not self.conclusive:
            return 'inconclusive'
        return 'safe' if self.safe else 'unsafe'


class StateTable:
    """Numérotation des états réduits, images par renommage et cache des transitions"""

    def __init__(self, protocol: ProtocolSpec):
        self.protocol = protocol
        self.relabelings = list(protocol.relabelings())
        self.ids: Dict = {}
        self.states: List = []
        self.leaders: List[bool] = []
        self._images: List[Optional[Tuple[int, ...]]] = []
        self._transitions: Dict[Tuple[int, int], Tuple[int, int]] = {}

    def __len__(self):
        return len(self.states)

    def intern(self, state) -> int:
        state = self.protocol.reduce_state(state)
        index = self.ids.get(state)
        if index is None:
            index = len(self.states)
            if index > ID_MASK:
                raise InvalidParameterError(f"Plus de {ID_MASK + 1} états distincts à numéroter")
            self.ids[state] = index
            self.states.append(state)
            self.leaders.append(self.protocol.is_leader(state))
            self._images.append(None)
        return index

    def images(self, index: int) -> Tuple[int, ...]:
        images = self._images[index]
        if images is None:
            state = self.states[index]
            images = tuple(self.intern(relabel(state)) for relabel in self.relabelings)
            self._images[index] = images
        return images

    def transition(self, pair: Tuple[int, int]) -> Tuple[int, int]:
        result = self._transitions.get(pair)
        if result is None:
            a, b = self.protocol.transition(self.states[pair[0]], self.states[pair[1]])
            result = self._transitions[pair] = (self.intern(a), self.intern(b))
        return result

    def canonical(self, ids: Sequence[int]) -> Tuple[Tuple[int, ...], int]:
        """Plus petit multiensemble trié parmi les images; -1 si l'identité suffit"""
        best = tuple(sorted(ids))
        chosen = -1
        for k in range(len(self.relabelings)):
            candidate = tuple(sorted(self.images(i)[k] for i in ids))
            if candidate < best:
                best, chosen = candidate, k
        return best, chosen

    def agent_order(self, states: Sequence) -> List[int]:
        """Agents rangés comme les positions de la forme canonique"""
        ids = [self.intern(state) for state in states]
        _, chosen = self.canonical(ids)
        if chosen >= 0:
            ids = [self.images(i)[chosen] for i in ids]
        return sorted(range(len(ids)), key=ids.__getitem__)


def encode(ids: Sequence[int]) -> int:
    code = 0
    for index in ids:
        code = (code << ID_BITS) | index
    return code


def decode(code: int, n: int) -> List[int]:
    ids = [0] * n
    for position in range(n - 1, -1, -1):
        ids[position] = code & ID_MASK
        code >>= ID_BITS
    return ids


class ClosureExplorer:
    """
    Vérificateur réutilisable pour un protocole. Les configurations déjà
    prouvées sûres par une exploration complète ne sont plus réexplorées:
    vérifier plusieurs départs coûte à peu près leur union.
    """

    def __init__(self, protocol: ProtocolSpec, max_configs: int = DEFAULT_MAX_CONFIGS):
        Validator.validate_positive(max_configs, 'max_configs')
        self.protocol = protocol
        self.max_configs = max_configs
        self.table = StateTable(protocol)
        self.proven: Set[int] = set()

    def verify(self, config: Configuration) -> ClosureResult:
        """Explore toutes les configurations atteignables depuis config"""
        table = self.table
        leaders = table.leaders
        proven = self.proven
        protocol = self.protocol
        n = config.n
        moves = [(i, j) for i in range(n) for j in range(n) if i != j]

        start = encode(table.canonical([table.intern(s) for s in config.states])[0])
        if start in proven:
            return ClosureResult(0, True)
        # code -> (code du parent, indice du coup) ; None pour le départ
        parents: Dict[int, Optional[Tuple[int, int]]] = {start: None}
        queue = deque([start])
        explored = 0

        while queue:
            current = queue.popleft()
            ids = decode(current, n)
            explored += 1
            tried = set()
            for move, (i, j) in enumerate(moves):
                pair = (ids[i], ids[j])
                if pair in tried:
                    continue
                tried.add(pair)
                result = table.transition(pair)
                if result == pair:
                    continue
                if leaders[result[0]] != leaders[pair[0]] or leaders[result[1]] != leaders[pair[1]]:
                    schedule = self._counterexample(config, parents, current, move, moves)
                    logger.info(f"{protocol.name}: sortie modifiée après {len(schedule)} interactions")
                    return ClosureResult(explored, False, True, schedule)
                following = list(ids)
                following[i], following[j] = result
                code = encode(table.canonical(following)[0])
                if code in parents or code in proven:
                    continue
                parents[code] = (current, move)
                if len(parents) > self.max_configs:
                    logger.warning(f"{protocol.name}: plus de {self.max_configs} configurations, "
                                   f"vérification non concluante")
                    return ClosureResult(explored, False, False)
                queue.append(code)

        proven.update(parents)
        logger.debug(f"{protocol.name}: {explored} configurations explorées, fermeture vérifiée "
                     f"({len(table)} états, {len(proven)} configurations sûres connues)")
        return ClosureResult(explored, True)

    def _counterexample(self, config: Configuration, parents: Dict, current: int, move: int,
                        moves: List[Tuple[int, int]]) -> List[Tuple[int, int]]:
        path = [moves[move]]
        node = current
        while parents[node] is not None:
            node, step = parents[node]
            path.append(moves[step])
        path.reverse()
        return self._replay(config.states, path)

    def _replay(self, start: Sequence, positions: List[Tuple[int, int]]) -> List[Tuple[int, int]]:
        """Traduit un chemin en positions canoniques en ordonnancement sur les agents"""
        transition = self.protocol.transition
        states = list(start)
        schedule = []
        for i, j in positions:
            order = self.table.agent_order(states)
            u, v = order[i], order[j]
            states[u], states[v] = transition(states[u], states[v])
            schedule.append((u, v))
        return schedule


def verify_closure(config: Configuration,
                   protocol: Optional[ProtocolSpec] = None,
                   max_configs: int = DEFAULT_MAX_CONFIGS) -> ClosureResult:
    """
    Explore toutes les configurations atteignables depuis config. Au-delà de
    max_configs configurations distinctes, le résultat est non concluant.
    """
    protocol = protocol if protocol is not None else config.protocol
    return ClosureExplorer(protocol, max_configs).verify(config)


def converged_configuration(protocol: ProtocolSpec,
                            n: int,
                            seed: int,
                            max_steps: Optional[int] = None) -> Optional[Configuration]:
    """Configuration au premier pas à un seul leader d'un essai aléatoire"""
    result = run(protocol, n, RandomSource(seed), stop=single_leader, max_steps=max_steps)
    return result.configuration if result.stopped else None
