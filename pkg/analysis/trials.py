"""
Répartition des essais indépendants, éventuellement sur plusieurs processus.

Chaque essai reçoit sa propre graine dérivée de (graine maître, indice);
les résultats sont toujours rendus dans l'ordre des indices.
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, List, Sequence, TypeVar

from engine.scheduler import derive_trial_seed
from utils.validators import Validator

logger = logging.getLogger(__name__)

T = TypeVar('T')
R = TypeVar('R')


def trial_seeds(master_seed: int, trials: int) -> List[int]:
    Validator.validate_positive(trials, 'trials')
    return [derive_trial_seed(master_seed, index) for index in range(trials)]


def run_trials(worker: Callable[[T], R], tasks: Sequence[T], jobs: int = 1) -> List[R]:
    """Exécute worker sur chaque tâche; worker doit être une fonction de module"""
    Validator.validate_positive(jobs, 'jobs')
    tasks = list(tasks)
    if jobs == 1 or len(tasks) <= 1:
        results = []
        for index, task in enumerate(tasks, start=1):
            results.append(worker(task))
            if index % 50 == 0:
                logger.info(f"{index}/{len(tasks)} essais terminés")
        return results

    chunksize = max(1, len(tasks) // (jobs * 4))
    logger.info(f"{len(tasks)} essais répartis sur {jobs} processus")
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(worker, tasks, chunksize=chunksize))
