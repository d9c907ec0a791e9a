"""
Base común de los comandos de school choice: carga de archivos y códigos de salida
"""

import logging

from django.core.management.base import BaseCommand, CommandError

from school_choice.exceptions import ProblemValidationError
from school_choice.serializers import load_instance, load_lottery

logger = logging.getLogger(__name__)

EXIT_INVALID = 1
EXIT_SUPPORT_TOO_LARGE = 2
EXIT_AUDIT_FAILED = 3


class SchoolChoiceCommand(BaseCommand):
    """Traduce errores de entrada a CommandError con código de salida 1"""

    def add_instance_argument(self, parser):
        parser.add_argument('instance', type=str, help='Archivo JSON de la instancia')
        parser.add_argument(
            '--priority-completion',
            choices=['bottom-tie', 'error'],
            default=None,
            help='Completar prioridades incompletas (por defecto: el valor del archivo o DEFAULT_PRIORITY_COMPLETION)',
        )

    def fail(self, message, returncode=EXIT_INVALID):
        logger.error(message)
        raise CommandError(message, returncode=returncode)

    def load_instance(self, options):
        path = options['instance']
        try:
            return load_instance(path, completion=options.get('priority_completion'))
        except ProblemValidationError as e:
            self.fail(f"Invalid instance {path} [{e.code}]: {e}")
        except OSError as e:
            self.fail(f"Cannot read instance {path}: {e}")

    def load_lottery(self, path, problem):
        try:
            return load_lottery(path, problem)
        except ProblemValidationError as e:
            self.fail(f"Invalid lottery {path} [{e.code}]: {e}")
        except OSError as e:
            self.fail(f"Cannot read lottery {path}: {e}")
