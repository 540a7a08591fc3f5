"""
Module des mesures et vérifications
"""

from .closure import ClosureExplorer, ClosureResult, converged_configuration, verify_closure
from .epidemic_check import EpidemicBoundReport, epidemic_bound_check, standard_t
from .fairness import CoinFairnessReport, coin_fairness
from .observers import InvariantObserver, InvariantViolation, LeaderWatch, TrajectoryRecorder
from .predicates import PredicateTarget, config_predicates, first_visit
from .stabilization import StabilizationReport, StabilizationTask, measure_stabilization
from .states import count_states_report
from .statistics import scheduler_uniformity, slack_allowance
from .survivors import SurvivorHistogram, competition_game, survivor_histogram
from .symmetry import SymmetryReport, collect_reachable_states, symmetry_sweep
from .trials import run_trials, trial_seeds

__all__ = [
    'ClosureExplorer', 'ClosureResult', 'converged_configuration', 'verify_closure',
    'EpidemicBoundReport', 'epidemic_bound_check', 'standard_t',
    'CoinFairnessReport', 'coin_fairness',
    'InvariantObserver', 'InvariantViolation', 'LeaderWatch', 'TrajectoryRecorder',
    'PredicateTarget', 'config_predicates', 'first_visit',
    'StabilizationReport', 'StabilizationTask', 'measure_stabilization',
    'count_states_report',
    'scheduler_uniformity', 'slack_allowance',
    'SurvivorHistogram', 'competition_game', 'survivor_histogram',
    'SymmetryReport', 'collect_reachable_states', 'symmetry_sweep',
    'run_trials', 'trial_seeds',
]
