"""
Symétrie de la variante pll-sym sur des états atteignables.

Pour chaque paire (p, q) tirée parmi des états réellement atteints, on
vérifie que T(p, p) et T(q, q) rendent deux états égaux et que T(p, q) est
l'image miroir de T(q, p).
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from engine.scheduler import RandomSource
from engine.simulation import ProtocolSpec, run
from utils.validators import InvalidParameterError, Validator

logger = logging.getLogger(__name__)

MAX_REPORTED = 10


@dataclass
class SymmetryReport:
    states: int
    pairs: int
    mismatches: int = 0
    examples: List[Tuple] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.mismatches == 0

    def to_row(self) -> dict:
        return {'states': self.states, 'pairs': self.pairs, 'mismatches': self.mismatches,
                'pass': self.passed}


def collect_reachable_states(protocol: ProtocolSpec,
                             n: int,
                             seed: int,
                             runs: int = 4,
                             max_steps: Optional[int] = None) -> List:
    """États distincts atteints par runs exécutions, triés pour un ordre reproductible"""
    Validator.validate_positive(runs, 'runs')
    states = set()

    def remember(step, event, new_u, new_v):
        states.add(new_u)
        states.add(new_v)

    for trial in range(runs):
        run(protocol, n, RandomSource.for_trial(seed, trial), max_steps=max_steps,
            observers=[remember])
    logger.debug(f"{protocol.name}: {len(states)} états atteints en {runs} exécutions (n={n})")
    return sorted(states, key=repr)


def symmetry_sweep(protocol: ProtocolSpec, states: Sequence, pairs: int, seed: int) -> SymmetryReport:
    """Teste pairs paires tirées uniformément (avec remise) parmi states"""
    if not states:
        raise InvalidParameterError("Aucun état à tester")
    Validator.validate_positive(pairs, 'pairs')
    Validator.validate_seed(seed)
    transition = protocol.transition
    report = SymmetryReport(states=len(states), pairs=pairs)
    picks = np.random.default_rng(seed).integers(0, len(states), size=(pairs, 2))

    for i, j in picks.tolist():
        p, q = states[i], states[j]
        same_p = transition(p, p)
        same_q = transition(q, q)
        forward = transition(p, q)
        backward = transition(q, p)
        if same_p[0] != same_p[1] or same_q[0] != same_q[1] or forward != (backward[1], backward[0]):
            report.mismatches += 1
            if len(report.examples) < MAX_REPORTED:
                report.examples.append((p, q))

    if report.passed:
        logger.info(f"{protocol.name}: {pairs} paires symétriques sur {len(states)} états")
    else:
        logger.error(f"{protocol.name}: {report.mismatches} paires asymétriques sur {pairs}")
    return report
