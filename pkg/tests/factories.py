"""
Constructeurs d'états pour les tests.
"""

from models.pll import (NO_EXTRA, BackupVars, CommonVars, PLLState, QuickVars, Status, Timer,
                        TournVars)
from models.pll_sym import Coin, SymState


def common(status=Status.A, leader=True, tick=False, epoch=1, init=None, color=0):
    return CommonVars(leader, tick, status, epoch, epoch if init is None else init, color)


def fresh(status=Status.X):
    return PLLState(common(status, leader=True), NO_EXTRA)


def timer(count=0, color=0, epoch=1, tick=False, init=None):
    return PLLState(common(Status.B, False, tick, epoch, init, color), Timer(count))


def quick(level_q=0, done=False, leader=True, color=0, tick=False):
    return PLLState(common(Status.A, leader, tick, 1, None, color), QuickVars(level_q, done))


def tourn(rand=0, index=0, leader=True, epoch=2, color=0, tick=False):
    return PLLState(common(Status.A, leader, tick, epoch, None, color), TournVars(rand, index))


def backup(level_b=0, leader=True, tick=False, color=0):
    return PLLState(common(Status.A, leader, tick, 4, None, color), BackupVars(level_b))


def sym(state, coin=None):
    """Version symétrique d'un état; les suiveurs reçoivent la pièce J par défaut"""
    if coin is None and not state.leader:
        coin = Coin.J
    return SymState(state.common, state.group, coin)
