"""
Module des commandes
"""

from .experiments import (SCHEMA_VERSION, CommandReport, cmd_compare, cmd_epidemic, cmd_fairness,
                          cmd_predicates, cmd_stabilize, cmd_states, cmd_survivors, cmd_verify,
                          create_report)
from .settings import ExitCode, ExperimentConfig, UsageError

# Dictionnaire des commandes
COMMANDS = {
    'stabilize': cmd_stabilize,
    'survivors': cmd_survivors,
    'epidemic': cmd_epidemic,
    'states': cmd_states,
    'verify': cmd_verify,
    'compare': cmd_compare,
    'predicates': cmd_predicates,
    'fairness': cmd_fairness,
}

__all__ = [
    'COMMANDS', 'SCHEMA_VERSION', 'CommandReport', 'ExitCode', 'ExperimentConfig', 'UsageError',
    'create_report', 'cmd_compare', 'cmd_epidemic', 'cmd_fairness', 'cmd_predicates',
    'cmd_stabilize', 'cmd_states', 'cmd_survivors', 'cmd_verify',
]
