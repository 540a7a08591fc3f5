import os
from dotenv import load_dotenv

load_dotenv()


def _env_bool(name, default):
    value = os.environ.get(name)
    if value is None:
        return default
    return value.strip().lower() in ('1', 'true', 'yes', 'on')


class Config:
    """Configuration de base pour les expériences"""
    DEFAULT_SEED = os.environ.get('PLL_SEED', '20190101')
    DEFAULT_TRIALS = os.environ.get('PLL_TRIALS', '100')
    DEFAULT_JOBS = os.environ.get('PLL_JOBS', '1')
    LOG_FORMAT = os.environ.get('PLL_LOG_FORMAT', 'text')
    LOG_FILE = os.environ.get('PLL_LOG_FILE')
    LOG_LEVEL = os.environ.get('PLL_LOG_LEVEL')
    CHECK_INVARIANTS = _env_bool('PLL_CHECK_INVARIANTS', False)

    # Validation des variables d'environnement
    @staticmethod
    def validate_config():
        """Valide que les variables d'environnement fournies sont cohérentes"""
        errors = []
        for name, value in (('PLL_SEED', Config.DEFAULT_SEED),
                            ('PLL_TRIALS', Config.DEFAULT_TRIALS),
                            ('PLL_JOBS', Config.DEFAULT_JOBS)):
            if not value.isdigit():
                errors.append(f"{name}={value}")
        if Config.LOG_FORMAT not in ('text', 'json'):
            errors.append(f"PLL_LOG_FORMAT={Config.LOG_FORMAT}")

        if errors:
            raise ValueError(f"Variables d'environnement invalides: {', '.join(errors)}")

    @classmethod
    def defaults(cls):
        """Valeurs par défaut des options de la ligne de commande"""
        return {
            'seed': int(cls.DEFAULT_SEED),
            'trials': int(cls.DEFAULT_TRIALS),
            'jobs': int(cls.DEFAULT_JOBS),
        }


class DevelopmentConfig(Config):
    """Configuration pour le développement"""
    DEBUG = True
    CHECK_INVARIANTS = _env_bool('PLL_CHECK_INVARIANTS', True)


class ProductionConfig(Config):
    """Configuration pour les campagnes d'expériences"""
    DEBUG = False


# Dictionnaire des configurations
config = {
    'development': DevelopmentConfig,
    'production': ProductionConfig,
    'default': ProductionConfig
}
