import argparse
import logging
import os
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional

from pythonjsonlogger import jsonlogger

from analysis.observers import InvariantViolation
from commands import COMMANDS, SCHEMA_VERSION, ExitCode, ExperimentConfig, UsageError
from config import Config, config
from utils.output import write_report
from utils.validators import ValidationError, Validator

logger = logging.getLogger(__name__)

LOG_FORMAT = '%(asctime)s %(levelname)s %(name)s %(message)s'


class CommandParser(argparse.ArgumentParser):
    """ArgumentParser qui lève UsageError au lieu de quitter"""

    def error(self, message):
        raise UsageError(message)


def _int_list(text: str) -> List[int]:
    try:
        return [int(part) for part in text.replace(' ', '').split(',') if part]
    except ValueError:
        raise argparse.ArgumentTypeError(f"liste d'entiers attendue: {text}")


class Application:
    """Application en ligne de commande: analyse des options puis exécution d'une commande"""

    def __init__(self, settings, parser: CommandParser):
        self.settings = settings
        self.parser = parser
        self.error_handlers: Dict[type, Callable[[Exception], ExitCode]] = {}

    def errorhandler(self, exception_class: type):
        def decorator(handler):
            self.error_handlers[exception_class] = handler
            return handler
        return decorator

    def handle_error(self, error: Exception) -> int:
        for cls in type(error).__mro__:
            if cls in self.error_handlers:
                return int(self.error_handlers[cls](error))
        raise error

    def parse(self, argv: Optional[List[str]] = None) -> argparse.Namespace:
        argv = list(sys.argv[1:] if argv is None else argv)
        args = self.parser.parse_args(expand_config_file(argv))
        # les invariants suivent le profil sauf option explicite
        if getattr(args, 'check_invariants', None) is None:
            args.check_invariants = bool(self.settings.CHECK_INVARIANTS)
        return args

    def run(self, argv: Optional[List[str]] = None) -> int:
        try:
            args = self.parse(argv)
            experiment = ExperimentConfig.from_args(args)
            logger.info(f"Commande {args.command}: protocole {experiment.protocol}, graine {experiment.seed}")
            report = COMMANDS[args.command](experiment)
            write_report(report, experiment.format, experiment.out, SCHEMA_VERSION)
            log_summary(report)
            return int(report.exit_code)
        except Exception as error:
            return self.handle_error(error)


def expand_config_file(argv: List[str]) -> List[str]:
    """
    Remplace --config-file <chemin> par les options qu'il contient, placées
    juste après la commande: les options explicites gardent la priorité.
    """
    pre = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    pre.add_argument('--config-file')
    known, remaining = pre.parse_known_args(argv)
    if not known.config_file:
        return remaining
    path = Path(known.config_file)
    if not path.is_file():
        raise UsageError(f"Fichier de configuration introuvable: {path}")
    values = Validator.parse_key_value_lines(path.read_text(encoding='utf-8').splitlines())
    tokens = []
    for key, value in values.items():
        flag = '--' + key.replace('_', '-')
        if value.lower() in ('true', 'yes', 'on'):
            tokens.append(flag)
        elif value.lower() in ('false', 'no', 'off'):
            continue
        else:
            tokens.extend([flag, value])
    position = next((i for i, token in enumerate(remaining) if token in COMMANDS), None)
    if position is None:
        raise UsageError(f"Commande manquante (choix: {', '.join(COMMANDS)})")
    logger.debug(f"{len(values)} options lues depuis {path}")
    return remaining[:position + 1] + tokens + remaining[position + 1:]


def build_parser(defaults: dict) -> CommandParser:
    common = CommandParser(add_help=False)
    common.add_argument('--protocol', default='pll', help='pll, pll-sym ou baseline (défaut: pll)')
    common.add_argument('--n', type=int, help='Taille de population')
    common.add_argument('--m', type=int, help='Connaissance de n (défaut: max(2, ceil(log2 n)))')
    common.add_argument('--seed', type=int, default=defaults['seed'], help='Graine maître')
    common.add_argument('--trials', type=int, default=defaults['trials'], help="Nombre d'essais")
    common.add_argument('--max-steps', type=int, help='Nombre maximal de pas par essai')
    common.add_argument('--format', choices=['csv', 'json'], default='csv', help='Format du rapport')
    common.add_argument('--out', help='Fichier de sortie (défaut: sortie standard)')
    common.add_argument('--jobs', type=int, default=defaults['jobs'], help='Processus parallèles')
    common.add_argument('--config-file', help='Fichier key=value pré-remplissant les options')

    parser = CommandParser(description='Simulation et vérification du protocole P_LL')
    subparsers = parser.add_subparsers(dest='command', required=True)

    stabilize = subparsers.add_parser('stabilize', parents=[common], help='Temps de stabilisation')
    stabilize.add_argument('--n-values', type=_int_list, help='Balayage de n, ex. 64,256,1024')
    stabilize.add_argument('--hold-steps', type=int, help='Pas joués après la convergence')
    stabilize.add_argument('--check-invariants', action='store_true', default=None,
                           help='Vérifie les invariants à chaque pas')

    survivors = subparsers.add_parser('survivors', parents=[common], help='Leaders survivants')
    survivors.add_argument('--game', action='store_true', default=None,
                           help='Ajoute la distribution du jeu idéal')

    epidemic = subparsers.add_parser('epidemic', parents=[common], help="Borne de l'épidémie")
    epidemic.add_argument('--subset-size', type=int, help="Taille n' de la sous-population (défaut: n)")
    epidemic.add_argument('--t', type=float, help='Paramètre t (défaut: 3 n ln n)')

    states = subparsers.add_parser('states', parents=[common], help="Nombre d'états")
    states.add_argument('--m-values', type=_int_list, help='Valeurs de m (défaut: 8,16,32,64)')

    verify = subparsers.add_parser('verify', parents=[common], help='Fermeture exhaustive')
    verify.add_argument('--start', choices=['converged', 'initial'], help='Configuration de départ')
    verify.add_argument('--max-configs', type=int, help='Nombre maximal de configurations explorées')

    compare = subparsers.add_parser('compare', parents=[common], help='pll contre la référence')
    compare.add_argument('--n-values', type=_int_list, help='Valeurs de n comparées')

    predicates = subparsers.add_parser('predicates', parents=[common], help='Premier passage')
    predicates.add_argument('--target', help='color:i, start:i ou b_start (défaut: start:1)')

    fairness = subparsers.add_parser('fairness', parents=[common], help='Équité des pièces')
    fairness.add_argument('--min-flips', type=int, help='Lectures de pièce minimales')
    return parser


def configure_logging(settings):
    """Configure les logs de l'application (toujours sur la sortie d'erreur)"""
    level = settings.LOG_LEVEL or ('DEBUG' if settings.DEBUG else 'INFO')
    if settings.LOG_FORMAT == 'json':
        formatter = jsonlogger.JsonFormatter(LOG_FORMAT)
    else:
        formatter = logging.Formatter(LOG_FORMAT)
    handlers = [logging.StreamHandler(sys.stderr)]
    if settings.LOG_FILE:
        handlers.append(logging.FileHandler(settings.LOG_FILE))
    for handler in handlers:
        handler.setFormatter(formatter)
    logging.basicConfig(level=level.upper(), handlers=handlers, force=True)


def register_error_handlers(app):
    """Enregistre les gestionnaires d'erreurs globaux"""

    @app.errorhandler(ValidationError)
    def usage_error(error):
        logger.error(f"Paramètres invalides: {error}")
        return ExitCode.USAGE

    @app.errorhandler(InvariantViolation)
    def invariant_violation(error):
        logger.error(f"Invariant violé: {error}")
        return ExitCode.CHECK_FAILED

    @app.errorhandler(OSError)
    def io_error(error):
        logger.error(f"Erreur d'écriture: {error}")
        return ExitCode.USAGE

    @app.errorhandler(Exception)
    def handle_exception(error):
        logger.exception(f"Exception non gérée: {error}")
        return ExitCode.USAGE


def log_summary(report):
    logger.info("=" * 50)
    logger.info(f"RAPPORT {report.command.upper()}")
    logger.info("=" * 50)
    logger.info(f"Lignes: {len(report.rows)}")
    for name, passed in report.checks.items():
        logger.info(f"{name}: {'OK' if passed else 'ÉCHEC'}")
    logger.info(f"Code de sortie: {int(report.exit_code)}")
    logger.info("=" * 50)


def create_app(config_name=None):
    """Factory function pour créer l'application"""
    config_name = config_name or os.getenv('PLL_CONFIG', 'default')
    if config_name not in config:
        raise ValueError(f"Profil de configuration inconnu: {config_name}")
    settings = config[config_name]

    # Valider la configuration
    try:
        Config.validate_config()
    except ValueError as e:
        logger.error(f"Erreur de configuration: {str(e)}")
        raise

    configure_logging(settings)

    parser = build_parser(settings.defaults())
    app = Application(settings, parser)
    register_error_handlers(app)
    return app


def main():
    try:
        app = create_app()
    except ValueError:
        sys.exit(int(ExitCode.USAGE))
    sys.exit(app.run())


if __name__ == '__main__':
    main()
