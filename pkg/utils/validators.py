import logging
import math
from typing import Dict, List

logger = logging.getLogger(__name__)


class ValidationError(Exception):
    """Exception personnalisée pour les erreurs de validation"""
    pass


class InvalidPopulationError(ValidationError):
    """Taille de population incompatible avec la simulation demandée"""
    pass


class InvalidParameterError(ValidationError):
    """Paramètre de protocole ou d'expérience hors domaine"""
    pass


class Validator:
    """Classe pour valider les paramètres de simulation"""

    MAX_SEED = 2 ** 64

    @staticmethod
    def validate_population(n: int, minimum: int = 2) -> None:
        """Valide la taille de population n"""
        if not isinstance(n, int) or isinstance(n, bool):
            raise InvalidPopulationError(f"Taille de population invalide: {n!r}")
        if n < minimum:
            raise InvalidPopulationError(
                f"Population trop petite: n={n} (minimum {minimum})"
            )

    @staticmethod
    def validate_m(m: int) -> None:
        """Valide la connaissance m de la taille de population"""
        if not isinstance(m, int) or isinstance(m, bool) or m < 2:
            raise InvalidParameterError(f"m doit être un entier >= 2 (reçu {m!r})")

    @staticmethod
    def recommended_m(n: int) -> int:
        """Valeur par défaut de m: max(2, ceil(log2 n))"""
        return max(2, math.ceil(math.log2(n))) if n > 1 else 2

    @staticmethod
    def check_m_covers(m: int, n: int) -> bool:
        """Vérifie m >= ceil(log2 n); journalise un avertissement sinon"""
        required = math.ceil(math.log2(n)) if n > 1 else 0
        if m < required:
            logger.warning(f"m={m} < ceil(log2 n)={required} pour n={n}: on continue quand même")
            return False
        return True

    @staticmethod
    def validate_positive(value: int, name: str) -> None:
        """Valide qu'un entier est strictement positif"""
        if not isinstance(value, int) or isinstance(value, bool) or value < 1:
            raise InvalidParameterError(f"{name} doit être un entier >= 1 (reçu {value!r})")

    @staticmethod
    def validate_non_negative(value: int, name: str) -> None:
        """Valide qu'un entier est positif ou nul"""
        if not isinstance(value, int) or isinstance(value, bool) or value < 0:
            raise InvalidParameterError(f"{name} doit être un entier >= 0 (reçu {value!r})")

    @staticmethod
    def validate_seed(seed: int) -> None:
        """Valide une graine 64 bits"""
        if not isinstance(seed, int) or isinstance(seed, bool) or not 0 <= seed < Validator.MAX_SEED:
            raise InvalidParameterError(f"Graine hors de [0, 2^64): {seed!r}")

    @staticmethod
    def validate_subset_size(n: int, subset_size: int) -> None:
        """Valide 1 <= n' <= n pour une épidémie sur sous-population"""
        if not isinstance(subset_size, int) or not 1 <= subset_size <= n:
            raise InvalidParameterError(
                f"Taille de sous-population invalide: n'={subset_size!r} pour n={n}"
            )

    @staticmethod
    def parse_key_value_lines(lines: List[str]) -> Dict[str, str]:
        """Lit un fichier key=value (commentaires '#' et lignes vides ignorés)"""
        values = {}
        for number, raw in enumerate(lines, start=1):
            line = raw.strip()
            if not line or line.startswith('#'):
                continue
            if '=' not in line:
                raise ValidationError(f"Ligne {number} invalide (key=value attendu): {line}")
            key, value = line.split('=', 1)
            key = key.strip().lstrip('-').replace('-', '_')
            if not key:
                raise ValidationError(f"Ligne {number}: clé vide")
            values[key] = value.strip()
        return values
