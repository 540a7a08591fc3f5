"""
Mesure du temps de stabilisation d'un protocole d'élection.

La convergence est détectée au premier pas où il reste exactement un leader:
le nombre de leaders ne croît jamais et ne tombe jamais à zéro.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from engine.scheduler import RandomSource
from engine.simulation import Configuration, ProtocolSpec, run, single_leader
from utils.validators import Validator

from .observers import InvariantObserver, LeaderWatch, TrajectoryRecorder

logger = logging.getLogger(__name__)


@dataclass
class StabilizationReport:
    seed: int
    n: int
    converged: bool
    steps: int
    convergence_step: Optional[int] = None
    leader_count_trajectory: List[Tuple[int, int]] = field(default_factory=list, repr=False)
    epoch_entries: Dict[int, int] = field(default_factory=dict)
    held: Optional[bool] = None
    invariant_steps: int = 0

    @property
    def parallel_time(self) -> Optional[float]:
        if not self.converged:
            return None
        return self.convergence_step / self.n

    def to_row(self) -> dict:
        return {
            'seed': self.seed,
            'converged': self.converged,
            'steps': self.steps,
            'parallel_time': self.parallel_time,
        }


def measure_stabilization(protocol: ProtocolSpec,
                          n: int,
                          seed: int,
                          max_steps: Optional[int] = None,
                          hold_steps: int = 0,
                          check_invariants: bool = False,
                          interval: Optional[int] = None) -> StabilizationReport:
    """
    Exécute le protocole jusqu'au premier pas à un seul leader. Avec
    hold_steps > 0, l'exécution continue ensuite pour vérifier que le leader
    reste unique (held). Un dépassement de max_steps donne un rapport non convergé.
    """
    Validator.validate_seed(seed)
    Validator.validate_non_negative(hold_steps, 'hold_steps')
    config = Configuration.initial(protocol, n)
    recorder = TrajectoryRecorder(protocol, config, interval)
    observers = [recorder]
    checker = None
    if check_invariants:
        checker = InvariantObserver(protocol, config)
        observers.append(checker)

    rng = RandomSource(seed)
    result = run(protocol, n, rng, stop=single_leader, max_steps=max_steps,
                 observers=observers, configuration=config)
    recorder.mark()
    report = StabilizationReport(seed=seed, n=n, converged=result.stopped, steps=result.steps,
                                 convergence_step=result.steps if result.stopped else None)

    if result.stopped and hold_steps > 0:
        watch = LeaderWatch(config)
        run(protocol, n, rng, max_steps=hold_steps,
            observers=observers + [watch], configuration=config)
        recorder.mark()
        report.held = watch.lowest == 1 and watch.highest == 1
        if not report.held:
            logger.warning(f"{protocol.name}: leader non stable après convergence (n={n}, graine {seed})")
    elif not result.stopped:
        logger.info(f"{protocol.name}: pas de convergence en {result.steps} pas (n={n}, graine {seed})")

    report.leader_count_trajectory = recorder.trajectory
    report.epoch_entries = dict(sorted(recorder.epoch_entries.items()))
    if checker is not None:
        report.invariant_steps = checker.steps_checked
    return report


@dataclass(frozen=True)
class StabilizationTask:
    """Paramètres d'un essai, transmissibles à un processus de travail"""
    protocol: ProtocolSpec
    n: int
    seed: int
    max_steps: Optional[int] = None
    hold_steps: int = 0
    check_invariants: bool = False


def stabilization_worker(task: StabilizationTask) -> StabilizationReport:
    return measure_stabilization(task.protocol, task.n, task.seed, task.max_steps,
                                 task.hold_steps, task.check_invariants)
