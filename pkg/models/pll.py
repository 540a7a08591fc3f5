"""
Protocole d'élection de leader P_LL: O(log n) états par agent, stabilisation
en O(log n) temps parallèle en espérance.

Chaque agent porte six variables communes (leader, tick, status, epoch, init,
color) et des variables de groupe qui dépendent de (status, epoch):

    status X             aucune
    status B             count (minuteur)
    status A, epoch 1    level_q, done       (élimination rapide)
    status A, epoch 2/3  rand, index         (tournoi, joué deux fois)
    status A, epoch 4    level_b             (secours)

Les états sont des valeurs immuables. Une transition décongèle les deux états
dans des agents de travail, applique les étapes dans l'ordre de la routine
principale, puis regèle le résultat.
"""

import logging
from dataclasses import dataclass, replace
from enum import Enum
from functools import partial
from typing import Callable, Dict, Iterator, List, Optional, Tuple, Union

from engine.simulation import Output, ProtocolSpec
from utils.validators import Validator

logger = logging.getLogger(__name__)

LAST_EPOCH = 4


class Status(str, Enum):
    X = 'X'
    Y = 'Y'
    A = 'A'
    B = 'B'


INITIAL_STATUSES = (Status.X,)


@dataclass(frozen=True)
class Params:
    m: int
    l_max: int
    c_max: int
    phi: int


def _phi(m: int) -> int:
    # plus petit k tel que 3k >= 2 lg m, soit 8^k >= m^2 (calcul exact en entiers)
    k = 0
    while 8 ** k < m * m:
        k += 1
    return k


def params_from_m(m: int) -> Params:
    """Constantes dérivées de m: l_max = 5m, c_max = 41m, phi = ceil((2/3) lg m)"""
    Validator.validate_m(m)
    return Params(m=m, l_max=5 * m, c_max=41 * m, phi=_phi(m))


@dataclass(frozen=True, slots=True)
class CommonVars:
    leader: bool
    tick: bool
    status: Status
    epoch: int
    init: int
    color: int


@dataclass(frozen=True, slots=True)
class NoExtra:
    pass


@dataclass(frozen=True, slots=True)
class Timer:
    count: int


@dataclass(frozen=True, slots=True)
class QuickVars:
    level_q: int
    done: bool


@dataclass(frozen=True, slots=True)
class TournVars:
    rand: int
    index: int


@dataclass(frozen=True, slots=True)
class BackupVars:
    level_b: int


GroupVars = Union[NoExtra, Timer, QuickVars, TournVars, BackupVars]

NO_EXTRA = NoExtra()


def expected_group_type(status: Status, epoch: int) -> type:
    """Variante de variables de groupe imposée par (status, epoch)"""
    if status is Status.B:
        return Timer
    if status is Status.A:
        if epoch == 1:
            return QuickVars
        if epoch in (2, 3):
            return TournVars
        return BackupVars
    return NoExtra


@dataclass(frozen=True, slots=True)
class PLLState:
    common: CommonVars
    group: GroupVars

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
        common = self.common
        if common.status in (Status.X, Status.Y) and common.epoch != 1:
            return False
        return type(self.group) is expected_group_type(common.status, common.epoch)


class Agent:
    """Agent de travail mutable, utilisé uniquement pendant une transition"""

    __slots__ = ('leader', 'tick', 'status', 'epoch', 'init', 'color',
                 'count', 'level_q', 'done', 'rand', 'index', 'level_b', 'coin')

    def __init__(self, state):
        common = state.common
        self.leader = common.leader
        self.tick = common.tick
        self.status = common.status
        self.epoch = common.epoch
        self.init = common.init
        self.color = common.color
        self.count = self.level_q = self.rand = self.index = self.level_b = 0
        self.done = False
        self.coin = getattr(state, 'coin', None)
        group = state.group
        kind = type(group)
        if kind is Timer:
            self.count = group.count
        elif kind is QuickVars:
            self.level_q = group.level_q
            self.done = group.done
        elif kind is TournVars:
            self.rand = group.rand
            self.index = group.index
        elif kind is BackupVars:
            self.level_b = group.level_b

    def common(self) -> CommonVars:
        return CommonVars(self.leader, self.tick, self.status, self.epoch, self.init, self.color)

    def group(self) -> GroupVars:
        status = self.status
        if status is Status.B:
            return Timer(self.count)
        if status is Status.A:
            epoch = self.epoch
            if epoch == 1:
                return QuickVars(self.level_q, self.done)
            if epoch == LAST_EPOCH:
                return BackupVars(self.level_b)
            return TournVars(self.rand, self.index)
        return NO_EXTRA

    def sort_key(self) -> tuple:
        return (self.leader, self.tick, self.status.value, self.epoch, self.init, self.color,
                self.count, self.level_q, self.done, self.rand, self.index, self.level_b,
                self.coin.value if self.coin is not None else '')


class PLLProtocol(ProtocolSpec):
    """Élection de leader asymétrique en O(log n) temps parallèle"""

    name = 'pll'
    initial_statuses = INITIAL_STATUSES

    def __init__(self, params: Params):
        self.params = params

    @classmethod
    def from_m(cls, m: int) -> 'PLLProtocol':
        return cls(params_from_m(m))

    def __repr__(self):
        return f"{type(self).__name__}(m={self.params.m})"

    # Interface ProtocolSpec

    def initial_state(self) -> PLLState:
        return PLLState(CommonVars(True, False, Status.X, 1, 1, 0), NO_EXTRA)

    def output(self, state) -> Output:
        return Output.LEADER if state.common.leader else Output.FOLLOWER

    def is_leader(self, state) -> bool:
        return state.common.leader

    def epoch_of(self, state) -> int:
        return state.common.epoch

    def reduce_state(self, state):
        # tick est remis à faux au début de chaque transition, avant toute lecture
        return clear_tick(state)

    def relabelings(self) -> List[Callable]:
        """Rotations des trois couleurs: seule la relation (c + 1) % 3 est lue"""
        return [partial(shift_color, shift=1), partial(shift_color, shift=2)]

    def transition(self, s0, s1) -> Tuple:
        a = [Agent(s0), Agent(s1)]
        self._assign_status(a)
        a[0].tick = a[1].tick = False
        self._count_up(a)
        self._advance_epochs(a)
        self._init_groups(a)
        epoch = a[0].epoch
        if epoch == 1:
            self._quick_elimination(a)
        elif epoch == LAST_EPOCH:
            self._back_up(a)
        else:
            self._tournament(a)
        self._finish(a)
        return self._freeze(a[0]), self._freeze(a[1])

    # Étapes publiques, chacune appliquée isolément à une paire d'états

    def assign_status(self, s0, s1) -> Tuple:
        return self._apply(self._assign_status, s0, s1)

    def count_up(self, s0, s1) -> Tuple:
        return self._apply(self._count_up, s0, s1)

    def quick_elimination(self, s0, s1) -> Tuple:
        return self._apply(self._quick_elimination, s0, s1)

    def tournament(self, s0, s1) -> Tuple:
        return self._apply(self._tournament, s0, s1)

    def back_up(self, s0, s1) -> Tuple:
        return self._apply(self._back_up, s0, s1)

    def _apply(self, phase, s0, s1) -> Tuple:
        a = [Agent(s0), Agent(s1)]
        phase(a)
        return self._freeze(a[0]), self._freeze(a[1])

    def _freeze(self, agent: Agent):
        return PLLState(agent.common(), agent.group())

    # Points de variation pour la variante symétrique

    def _coin(self, a: List[Agent], i: int) -> Optional[bool]:
        """Pile (True) si le leader a[i] est l'initiateur, face sinon"""
        return i == 0

    def _demote(self, agent: Agent) -> None:
        agent.leader = False

    def _break_tie(self, a: List[Agent]) -> None:
        self._demote(a[1])

    def _finish(self, a: List[Agent]) -> None:
        pass

    # Attribution du statut

    def _assign_status(self, a: List[Agent]) -> None:
        x0, x1 = a
        fresh0 = x0.status is Status.X
        fresh1 = x1.status is Status.X
        if fresh0 and fresh1:
            x0.status, x0.level_q, x0.done, x0.leader = Status.A, 0, False, True
            x1.status, x1.count = Status.B, 0
            self._demote(x1)
        elif fresh0 != fresh1:
            self._make_late_candidate(x0 if fresh0 else x1)

    def _make_late_candidate(self, agent: Agent) -> None:
        agent.status, agent.level_q, agent.done = Status.A, 0, True
        self._demote(agent)

    # Synchronisation par minuteurs et couleurs

    def _count_up(self, a: List[Agent]) -> None:
        c_max = self.params.c_max
        for x in a:
            if x.status is Status.B:
                x.count = (x.count + 1) % c_max
                if x.count == 0:
                    x.color = (x.color + 1) % 3
                    x.tick = True
        for i in (0, 1):
            behind, ahead = a[i], a[1 - i]
            if ahead.color == (behind.color + 1) % 3:
                behind.color = ahead.color
                behind.tick = True
                if behind.status is Status.B:
                    behind.count = 0
                break

    def _advance_epochs(self, a: List[Agent]) -> None:
        for x in a:
            if x.tick:
                x.epoch = min(x.epoch + 1, LAST_EPOCH)
        a[0].epoch = a[1].epoch = max(a[0].epoch, a[1].epoch)

    def _init_groups(self, a: List[Agent]) -> None:
        for x in a:
            if x.epoch > x.init:
                if x.status is Status.A:
                    if x.epoch == LAST_EPOCH:
                        x.level_b = 0
                    elif x.epoch in (2, 3):
                        x.rand, x.index = 0, 0
                x.init = x.epoch

    # Modules

    def _quick_elimination(self, a: List[Agent]) -> None:
        for i in (0, 1):
            x, y = a[i], a[1 - i]
            if x.leader and not y.leader and not x.done:
                heads = self._coin(a, i)
                if heads is True:
                    x.level_q = min(x.level_q + 1, self.params.l_max)
                elif heads is False:
                    x.done = True
                break
        x0, x1 = a
        if (x0.status is Status.A and x1.status is Status.A and x0.done and x1.done
                and x0.level_q != x1.level_q):
            low, high = (x0, x1) if x0.level_q < x1.level_q else (x1, x0)
            self._demote(low)
            low.level_q = high.level_q

    def _tournament(self, a: List[Agent]) -> None:
        phi = self.params.phi
        for i in (0, 1):
            x, y = a[i], a[1 - i]
            if x.leader and not y.leader and x.index < phi:
                heads = self._coin(a, i)
                if heads is not None:
                    x.rand = 2 * x.rand + (0 if heads else 1)
                    x.index = min(x.index + 1, phi)
                break
        x0, x1 = a
        if (x0.status is Status.A and x1.status is Status.A and x0.index == phi
                and x1.index == phi and x0.rand != x1.rand):
            low, high = (x0, x1) if x0.rand < x1.rand else (x1, x0)
            self._demote(low)
            low.rand = high.rand

    def _back_up(self, a: List[Agent]) -> None:
        for i in (0, 1):
            x, y = a[i], a[1 - i]
            if x.tick and x.leader and not y.leader:
                if self._coin(a, i) is True:
                    x.level_b = min(x.level_b + 1, self.params.l_max)
                break
        x0, x1 = a
        if x0.status is Status.A and x1.status is Status.A and x0.level_b != x1.level_b:
            low, high = (x0, x1) if x0.level_b < x1.level_b else (x1, x0)
            low.level_b = high.level_b
            self._demote(low)
        if x0.leader and x1.leader:
            self._break_tie(a)

    # Espace d'états

    def state_space(self) -> Iterator[PLLState]:
        for common, group in self._enumerate_variables():
            yield PLLState(common, group)

    def _enumerate_variables(self) -> Iterator[Tuple[CommonVars, GroupVars]]:
        p = self.params
        for leader in (False, True):
            for tick in (False, True):
                for color in range(3):
                    for status in self.initial_statuses:
                        yield CommonVars(leader, tick, status, 1, 1, color), NO_EXTRA
                    for epoch in range(1, LAST_EPOCH + 1):
                        for init in range(1, epoch + 1):
                            timer = CommonVars(leader, tick, Status.B, epoch, init, color)
                            for count in range(p.c_max):
                                yield timer, Timer(count)
                            candidate = CommonVars(leader, tick, Status.A, epoch, init, color)
                            for group in self._candidate_groups(epoch):
                                yield candidate, group

    def _candidate_groups(self, epoch: int) -> Iterator[GroupVars]:
        p = self.params
        if epoch == 1:
            for level_q in range(p.l_max + 1):
                for done in (False, True):
                    yield QuickVars(level_q, done)
        elif epoch == LAST_EPOCH:
            for level_b in range(p.l_max + 1):
                yield BackupVars(level_b)
        else:
            for rand in range(2 ** p.phi):
                for index in range(p.phi + 1):
                    yield TournVars(rand, index)

    def check_state(self, state) -> List[str]:
        """Violations des invariants de type d'un état (liste vide si conforme)"""
        p = self.params
        problems = []
        common, group = state.common, state.group
        if not state.is_consistent():
            problems.append(f"variables de groupe {type(group).__name__} incohérentes "
                            f"avec status={common.status.value}, epoch={common.epoch}")
        if not 1 <= common.init <= common.epoch <= LAST_EPOCH:
            problems.append(f"init={common.init}, epoch={common.epoch} hors domaine")
        if common.color not in (0, 1, 2):
            problems.append(f"color={common.color} hors domaine")
        if common.status is Status.B and common.leader:
            problems.append("un minuteur ne peut pas être leader")
        kind = type(group)
        if kind is Timer and not 0 <= group.count < p.c_max:
            problems.append(f"count={group.count} hors de [0, {p.c_max})")
        elif kind is QuickVars and not 0 <= group.level_q <= p.l_max:
            problems.append(f"level_q={group.level_q} dépasse l_max={p.l_max}")
        elif kind is TournVars and not (0 <= group.index <= p.phi and 0 <= group.rand < 2 ** p.phi):
            problems.append(f"rand={group.rand}, index={group.index} hors domaine (phi={p.phi})")
        elif kind is BackupVars and not 0 <= group.level_b <= p.l_max:
            problems.append(f"level_b={group.level_b} dépasse l_max={p.l_max}")
        return problems


def clear_tick(state):
    if not state.common.tick:
        return state
    return replace(state, common=replace(state.common, tick=False))


def shift_color(state, shift: int):
    common = state.common
    return replace(state, common=replace(common, color=(common.color + shift) % 3))


def initial_state(p: Params) -> PLLState:
    return PLLProtocol(p).initial_state()


def enumerate_states(p: Params) -> int:
    """Nombre exact d'états |Q| par énumération exhaustive"""
    return sum(1 for _ in PLLProtocol(p).state_space())


def state_count_breakdown(p: Params) -> Dict[str, int]:
    """Contribution de chaque groupe au nombre d'états"""
    breakdown = {'initial': 0, 'timer': 0, 'quick': 0, 'tournament': 0, 'backup': 0}
    names = {NoExtra: 'initial', Timer: 'timer', QuickVars: 'quick',
             TournVars: 'tournament', BackupVars: 'backup'}
    for _, group in PLLProtocol(p)._enumerate_variables():
        breakdown[names[type(group)]] += 1
    breakdown['total'] = sum(breakdown.values())
    return breakdown
