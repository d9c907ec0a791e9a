"""
Comando para generar instancias aleatorias reproducibles
"""

import json

from django.core.management.base import BaseCommand, CommandError

from school_choice.oracle import random_problem
from school_choice.serializers import write_json


class Command(BaseCommand):
    help = 'Generar una instancia aleatoria determinista dada la semilla'

    def add_arguments(self, parser):
        parser.add_argument('--seed', type=int, default=0)
        parser.add_argument('--students', type=int, default=4)
        parser.add_argument('--schools', type=int, default=3)
        parser.add_argument(
            '--tie-density',
            type=float,
            default=0.5,
            help='Probabilidad de empate entre estudiantes consecutivos (0 = estricto, 1 = un solo tier)',
        )
        parser.add_argument('--out', type=str, help='Archivo de salida (por defecto stdout)')

    def handle(self, *args, **options):
        try:
            problem = random_problem(
                options['seed'], options['students'], options['schools'], options['tie_density']
            )
        except ValueError as e:
            raise CommandError(str(e), returncode=1)

        document = problem.to_ids()
        if options['out']:
            write_json(options['out'], document)
            self.stdout.write(self.style.SUCCESS(f"Instance written to {options['out']}"))
        else:
            self.stdout.write(json.dumps(document, indent=2, ensure_ascii=False))
