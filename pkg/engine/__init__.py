"""
Module du moteur de simulation
"""

from .scheduler import InteractionEvent, RandomSource, derive_trial_seed, draw_interaction
from .simulation import (Configuration, Output, ProtocolSpec, RunResult, default_max_steps,
                         parallel_time, run, single_leader, step)
from .epidemic import EpidemicResult, EpidemicState, simulate_epidemic

__all__ = [
    'InteractionEvent', 'RandomSource', 'derive_trial_seed', 'draw_interaction',
    'Configuration', 'Output', 'ProtocolSpec', 'RunResult', 'default_max_steps',
    'parallel_time', 'run', 'single_leader', 'step',
    'EpidemicResult', 'EpidemicState', 'simulate_epidemic',
]
