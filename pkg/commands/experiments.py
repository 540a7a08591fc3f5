"""
Commandes d'expérience. Chaque commande rend un CommandReport construit par
create_report: lignes par essai, agrégats, vérifications et code de sortie.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import pandas as pd

from analysis import (ClosureExplorer, StabilizationTask, coin_fairness, converged_configuration,
                      count_states_report, epidemic_bound_check, first_visit, run_trials,
                      standard_t, survivor_histogram, trial_seeds)
from analysis.stabilization import stabilization_worker
from analysis.states import growth_passes
from analysis.statistics import summarize
from engine.simulation import Configuration, default_max_steps
from utils.validators import InvalidParameterError

from .settings import ExitCode, ExperimentConfig

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1
SCALING_SPREAD = 3.0
SEPARATION_FACTOR = 5.0
VISIT_FREQUENCY = 0.95
DEFAULT_M_VALUES = [8, 16, 32, 64]


@dataclass
class CommandReport:
    command: str
    config: dict
    rows: pd.DataFrame
    aggregates: pd.DataFrame
    checks: Dict[str, bool] = field(default_factory=dict)
    message: Optional[str] = None
    exit_code: ExitCode = ExitCode.OK

    @property
    def passed(self) -> bool:
        return all(self.checks.values())


def create_report(command: str,
                  config: ExperimentConfig,
                  rows: List[dict],
                  aggregates: Optional[List[dict]] = None,
                  checks: Optional[Dict[str, bool]] = None,
                  message: Optional[str] = None,
                  incomplete: bool = False) -> CommandReport:
    """Rapport commun à toutes les commandes; incomplete signale un délai dépassé"""
    checks = {name: bool(value) for name, value in (checks or {}).items()}
    if incomplete:
        exit_code = ExitCode.INCOMPLETE
    elif not all(checks.values()):
        exit_code = ExitCode.CHECK_FAILED
    else:
        exit_code = ExitCode.OK
    return CommandReport(command=command,
                         config=config.echo(),
                         rows=pd.DataFrame.from_records(rows),
                         aggregates=pd.DataFrame.from_records(aggregates or []),
                         checks=checks,
                         message=message,
                         exit_code=exit_code)


def _stabilization_rows(config: ExperimentConfig, protocol_name: str, n: int) -> List[dict]:
    protocol = config.build_protocol(n, protocol_name)
    seeds = trial_seeds(config.seed, config.trials)
    tasks = [StabilizationTask(protocol, n, seed, config.max_steps, config.hold_steps,
                               config.check_invariants) for seed in seeds]
    logger.info(f"{protocol_name}: {config.trials} essais pour n={n}")
    reports = run_trials(stabilization_worker, tasks, config.jobs)
    rows = []
    for trial, report in enumerate(reports):
        row = {'n': n, 'protocol': protocol_name, 'trial': trial}
        row.update(report.to_row())
        if config.hold_steps:
            row['held'] = report.held
        rows.append(row)
    return rows


def _time_aggregate(rows: List[dict], n: int, protocol_name: str) -> dict:
    times = [row['parallel_time'] for row in rows if row['converged']]
    stats = summarize(times)
    mean = stats['mean']
    return {
        'n': n,
        'protocol': protocol_name,
        'trials': len(rows),
        'converged': len(times),
        'mean_parallel_time': mean,
        'median_parallel_time': stats['median'],
        'p95_parallel_time': stats['p95'],
        'mean_over_ln_n': mean / math.log(n) if mean is not None else None,
    }


def cmd_stabilize(config: ExperimentConfig) -> CommandReport:
    """Temps de stabilisation par essai, agrégats par n"""
    rows, aggregates = [], []
    for n in config.populations():
        trial_rows = _stabilization_rows(config, config.protocol, n)
        rows.extend(trial_rows)
        aggregates.append(_time_aggregate(trial_rows, n, config.protocol))

    checks = {'all_converged': all(row['converged'] for row in rows)}
    if config.hold_steps:
        checks['leader_held'] = all(row['held'] for row in rows if row['converged'])
    ratios = [a['mean_over_ln_n'] for a in aggregates if a['mean_over_ln_n']]
    if len(aggregates) > 1 and len(ratios) == len(aggregates):
        checks['log_scaling'] = max(ratios) <= SCALING_SPREAD * min(ratios)
    return create_report('stabilize', config, rows, aggregates, checks,
                         incomplete=not checks['all_converged'])


def cmd_survivors(config: ExperimentConfig) -> CommandReport:
    """Histogramme des survivants à l'horizon floor(21 n ln n)"""
    if config.protocol != 'pll':
        raise InvalidParameterError("survivors s'applique uniquement au protocole pll")
    n = config.populations()[0]
    histogram = survivor_histogram(n, config.resolved_m(n), config.trials, config.seed,
                                   config.jobs, with_game=config.game)
    table = histogram.rows()
    checks = {
        'no_extinction': histogram.counts.get(0, 0) == 0,
        'bounds': bool(table['pass'].all()),
        'tail': histogram.tail_passes(),
    }
    return create_report('survivors', config, table.to_dict(orient='records'),
                         [histogram.aggregates()], checks)


def cmd_epidemic(config: ExperimentConfig) -> CommandReport:
    """Taux d'échec de l'épidémie face à la borne n e^(-t/n)"""
    n = config.populations()[0]
    subset_size = config.subset_size if config.subset_size is not None else n
    t = config.t if config.t is not None else standard_t(n)
    report = epidemic_bound_check(n, subset_size, config.trials, t, config.seed, config.jobs)
    return create_report('epidemic', config, [report.to_row()], [],
                         {'bound': report.passed})


def cmd_states(config: ExperimentConfig) -> CommandReport:
    """Nombre d'états |Q| en fonction de m"""
    table = count_states_report(config.m_values or DEFAULT_M_VALUES)
    return create_report('states', config, table.to_dict(orient='records'), [],
                         {'growth': growth_passes(table)})


def cmd_verify(config: ExperimentConfig) -> CommandReport:
    """
    Fermeture des configurations: une configuration convergée par essai, ou
    la configuration initiale avec --start initial.
    """
    n = config.populations()[0]
    protocol = config.build_protocol(n)
    explorer = ClosureExplorer(protocol, config.max_configs)
    rows = []
    incomplete = False
    if config.start == 'initial':
        starts = [(0, config.seed, Configuration.initial(protocol, n))]
    else:
        starts = [(trial, seed, converged_configuration(protocol, n, seed, config.max_steps))
                  for trial, seed in enumerate(trial_seeds(config.seed, config.trials))]
    for trial, seed, start in starts:
        row = {'trial': trial, 'seed': seed, 'converged': start is not None,
               'explored': 0, 'verdict': 'timeout', 'counterexample': ''}
        if start is None:
            incomplete = True
        else:
            result = explorer.verify(start)
            row['explored'] = result.explored
            row['verdict'] = result.verdict
            if result.counterexample is not None:
                row['counterexample'] = ' '.join(f"{u}>{v}" for u, v in result.counterexample)
            incomplete = incomplete or not result.conclusive
        rows.append(row)

    verdicts = [row['verdict'] for row in rows]
    aggregates = [{'n': n, 'protocol': config.protocol, 'configurations': len(rows),
                   'safe': verdicts.count('safe'), 'unsafe': verdicts.count('unsafe'),
                   'inconclusive': verdicts.count('inconclusive') + verdicts.count('timeout')}]
    return create_report('verify', config, rows, aggregates,
                         {'all_safe': all(v == 'safe' for v in verdicts)},
                         incomplete=incomplete and 'unsafe' not in verdicts)


def cmd_compare(config: ExperimentConfig) -> CommandReport:
    """Temps parallèle moyen de pll face à la référence à deux états"""
    rows, aggregates = [], []
    checks = {}
    for n in config.populations():
        means = {}
        for name in ('pll', 'baseline'):
            trial_rows = _stabilization_rows(config, name, n)
            rows.extend(trial_rows)
            aggregate = _time_aggregate(trial_rows, n, name)
            aggregates.append(aggregate)
            means[name] = aggregate['mean_parallel_time']
        if means['pll'] is not None and means['baseline'] is not None:
            checks[f'faster_at_{n}'] = means['pll'] < means['baseline']
            checks[f'separation_at_{n}'] = SEPARATION_FACTOR * means['pll'] < means['baseline']
    all_converged = all(row['converged'] for row in rows)
    checks['all_converged'] = all_converged
    return create_report('compare', config, rows, aggregates, checks, incomplete=not all_converged)


def cmd_predicates(config: ExperimentConfig) -> CommandReport:
    """Premier passage par un prédicat de configuration, par essai"""
    n = config.populations()[0]
    protocol = config.build_protocol(n)
    max_steps = config.max_steps or default_max_steps(n)
    rows = []
    for trial, seed in enumerate(trial_seeds(config.seed, config.trials)):
        visit = first_visit(protocol, n, seed, config.target, max_steps)
        rows.append({'trial': trial, 'seed': seed, 'visited': visit is not None,
                     'step': visit, 'parallel_time': visit / n if visit is not None else None})
    times = [row['parallel_time'] for row in rows if row['visited']]
    frequency = len(times) / len(rows)
    aggregate = {'n': n, 'target': config.target, 'max_steps': max_steps,
                 'frequency': frequency}
    aggregate.update({f'{key}_parallel_time': value for key, value in summarize(times).items()})
    return create_report('predicates', config, rows, [aggregate],
                         {'frequency': frequency >= VISIT_FREQUENCY})


def cmd_fairness(config: ExperimentConfig) -> CommandReport:
    """Fréquence de pile des lectures de pièce de pll-sym"""
    if config.protocol != 'pll-sym':
        raise InvalidParameterError("fairness s'applique uniquement au protocole pll-sym")
    n = config.populations()[0]
    config.build_protocol(n)
    report = coin_fairness(n, config.resolved_m(n), config.seed, config.max_steps,
                           config.min_flips, max_trials=config.trials)
    return create_report('fairness', config, [report.to_row()], [],
                         {'three_sigma': report.passed},
                         incomplete=report.result is None or report.result.flips < config.min_flips)
