"""
Vérification empirique de la borne de l'épidémie: la probabilité qu'une
épidémie sur V' ne soit pas terminée après 2 ceil(n/n') t pas est au plus
n e^(-t/n).
"""

import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional

from engine.epidemic import simulate_epidemic
from engine.scheduler import RandomSource
from utils.validators import InvalidParameterError, Validator

from .statistics import slack_allowance, summarize
from .trials import run_trials, trial_seeds

logger = logging.getLogger(__name__)


def epidemic_horizon(n: int, subset_size: int, t: float) -> int:
    return math.floor(2 * math.ceil(n / subset_size) * t)


def epidemic_bound(n: int, t: float) -> float:
    """n e^(-t/n), plafonnée à 1"""
    return min(1.0, n * math.exp(-t / n))


def standard_t(n: int) -> float:
    """t = 3 n ln n, pour lequel la borne vaut n^-2"""
    return 3 * n * math.log(n)


@dataclass
class EpidemicBoundReport:
    n: int
    subset_size: int
    trials: int
    t: float
    horizon: int
    failures: int
    bound: float
    completion_steps: List[int] = field(default_factory=list, repr=False)

    @property
    def failure_rate(self) -> float:
        return self.failures / self.trials

    @property
    def passed(self) -> bool:
        return self.failure_rate <= self.bound + slack_allowance(self.bound, self.trials)

    @property
    def median_completion(self) -> Optional[float]:
        return summarize(self.completion_steps)['median']

    def to_row(self) -> dict:
        return {
            'n': self.n,
            'subset_size': self.subset_size,
            'trials': self.trials,
            't': self.t,
            'horizon': self.horizon,
            'failures': self.failures,
            'failure_rate': self.failure_rate,
            'bound': self.bound,
            'median_completion': self.median_completion,
            'pass': self.passed,
        }


def _epidemic_worker(task) -> Optional[int]:
    n, subset_size, seed, horizon = task
    result = simulate_epidemic(n, subset_size, RandomSource(seed), horizon)
    return result.completion_step if result.completed else None


def epidemic_bound_check(n: int,
                         subset_size: int,
                         trials: int,
                         t: float,
                         seed: int = 0,
                         jobs: int = 1) -> EpidemicBoundReport:
    """Fraction des essais non terminés à l'horizon, comparée à n e^(-t/n)"""
    Validator.validate_population(n)
    Validator.validate_subset_size(n, subset_size)
    Validator.validate_positive(trials, 'trials')
    if t < 0:
        raise InvalidParameterError(f"t doit être >= 0 (reçu {t})")
    horizon = epidemic_horizon(n, subset_size, t)
    seeds = trial_seeds(seed, trials)
    logger.info(f"Épidémie: n={n}, n'={subset_size}, {trials} essais, horizon {horizon} pas")
    outcomes = run_trials(_epidemic_worker, [(n, subset_size, s, horizon) for s in seeds], jobs)
    completed = [step for step in outcomes if step is not None]
    report = EpidemicBoundReport(n=n, subset_size=subset_size, trials=trials, t=t, horizon=horizon,
                                 failures=trials - len(completed), bound=epidemic_bound(n, t),
                                 completion_steps=completed)
    if report.failures:
        logger.warning(f"Épidémie: {report.failures}/{trials} essais non terminés "
                       f"(borne {report.bound:.3g})")
    return report
