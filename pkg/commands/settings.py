"""
Paramètres d'une expérience et codes de sortie.
"""

import logging
from dataclasses import asdict, dataclass, field
from enum import IntEnum
from typing import List, Optional

from models import PROTOCOLS, build_protocol
from utils.validators import InvalidParameterError, ValidationError, Validator

logger = logging.getLogger(__name__)

FORMATS = ('csv', 'json')

# Champs absents de l'écho de configuration: ils ne changent pas les résultats
NOT_ECHOED = ('out', 'jobs', 'check_invariants')


class ExitCode(IntEnum):
    OK = 0
    USAGE = 1
    CHECK_FAILED = 2
    INCOMPLETE = 3


class UsageError(ValidationError):
    """Ligne de commande invalide"""
    pass


@dataclass
class ExperimentConfig:
    protocol: str = 'pll'
    n: Optional[int] = None
    m: Optional[int] = None
    seed: int = 20190101
    trials: int = 100
    max_steps: Optional[int] = None
    format: str = 'csv'
    out: Optional[str] = None
    jobs: int = 1
    n_values: List[int] = field(default_factory=list)
    m_values: List[int] = field(default_factory=list)
    subset_size: Optional[int] = None
    t: Optional[float] = None
    hold_steps: int = 0
    check_invariants: bool = False
    game: bool = False
    start: str = 'converged'
    max_configs: int = 2_000_000
    target: str = 'start:1'
    min_flips: int = 100_000

    @classmethod
    def from_args(cls, args) -> 'ExperimentConfig':
        known = cls.__dataclass_fields__
        values = {key: value for key, value in vars(args).items() if key in known and value is not None}
        config = cls(**values)
        config.validate()
        return config

    def validate(self) -> None:
        if self.protocol not in PROTOCOLS:
            raise InvalidParameterError(f"Protocole inconnu: {self.protocol} (choix: {', '.join(PROTOCOLS)})")
        if self.format not in FORMATS:
            raise InvalidParameterError(f"Format inconnu: {self.format} (choix: {', '.join(FORMATS)})")
        Validator.validate_seed(self.seed)
        Validator.validate_positive(self.trials, 'trials')
        Validator.validate_positive(self.jobs, 'jobs')
        Validator.validate_non_negative(self.hold_steps, 'hold_steps')
        Validator.validate_positive(self.max_configs, 'max_configs')
        Validator.validate_positive(self.min_flips, 'min_flips')
        if self.max_steps is not None:
            Validator.validate_positive(self.max_steps, 'max_steps')
        if self.m is not None:
            Validator.validate_m(self.m)
        for m in self.m_values:
            Validator.validate_m(m)
        if self.start not in ('converged', 'initial'):
            raise InvalidParameterError(f"Départ inconnu: {self.start} (converged ou initial)")
        if self.t is not None and self.t < 0:
            raise InvalidParameterError(f"t doit être >= 0 (reçu {self.t})")
        for n in self.populations(required=False):
            self.build_protocol(n)

    def populations(self, required: bool = True) -> List[int]:
        """Tailles de population demandées: --n-values, sinon --n"""
        if self.n_values:
            return list(self.n_values)
        if self.n is not None:
            return [self.n]
        if required:
            raise UsageError("--n (ou --n-values) est requis pour cette commande")
        return []

    def resolved_m(self, n: int) -> int:
        return self.m if self.m is not None else Validator.recommended_m(n)

    def build_protocol(self, n: int, name: Optional[str] = None):
        return build_protocol(name or self.protocol, n=n, m=self.m)

    def echo(self) -> dict:
        """Paramètres recopiés dans le rapport"""
        return {key: value for key, value in asdict(self).items() if key not in NOT_ECHOED}
