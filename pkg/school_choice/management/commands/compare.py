"""
Comando para comparar dos loterías por dominancia estocástica de primer orden
"""

import pandas as pd

from school_choice.lottery import Dominance
from school_choice.management.base import SchoolChoiceCommand
from school_choice.services import SchoolChoiceService

VERDICT_LABELS = {
    Dominance.EQUAL: 'equal',
    Dominance.FIRST_STRICTLY_DOMINATES: 'A strictly dominates',
    Dominance.SECOND_STRICTLY_DOMINATES: 'B strictly dominates',
    Dominance.INCOMPARABLE: 'incomparable',
}


class Command(SchoolChoiceCommand):
    help = 'Comparar las loterías A y B estudiante por estudiante y por dominancia ordinal'

    def add_arguments(self, parser):
        self.add_instance_argument(parser)
        parser.add_argument('lottery_a', type=str, help='Archivo JSON de la lotería A')
        parser.add_argument('lottery_b', type=str, help='Archivo JSON de la lotería B')

    def handle(self, *args, **options):
        instance = self.load_instance(options)
        problem = instance.problem
        lottery_a = self.load_lottery(options['lottery_a'], problem)
        lottery_b = self.load_lottery(options['lottery_b'], problem)

        result = SchoolChoiceService().compare(problem, lottery_a, lottery_b)

        frame = pd.DataFrame(
            {'verdict': [VERDICT_LABELS[v] for v in result.verdicts]},
            index=pd.Index(problem.students, name='student'),
        )
        self.stdout.write(frame.to_string())
        self.stdout.write('')

        if result.a_dominates_b:
            self.stdout.write(self.style.SUCCESS('A ordinally dominates B'))
        elif result.b_dominates_a:
            self.stdout.write(self.style.SUCCESS('B ordinally dominates A'))
        else:
            self.stdout.write(self.style.WARNING('Neither lottery ordinally dominates the other'))
