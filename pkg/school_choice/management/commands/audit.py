"""
Comando para auditar una lotería: estabilidad ex ante y ex post, ETE y ciclos de mejora ex ante
"""

import json

import pandas as pd

from school_choice.management.base import EXIT_AUDIT_FAILED, SchoolChoiceCommand
from school_choice.serializers import report_to_document
from school_choice.services import SchoolChoiceService


class Command(SchoolChoiceCommand):
    help = 'Auditar una lotería contra estabilidad ex ante, ex post, ETE y easic'

    def add_arguments(self, parser):
        self.add_instance_argument(parser)
        parser.add_argument('lottery', type=str, help='Archivo JSON de la lotería')
        parser.add_argument('--json', action='store_true', help='Imprimir el reporte como JSON')

    def handle(self, *args, **options):
        instance = self.load_instance(options)
        lottery = self.load_lottery(options['lottery'], instance.problem)
        report = SchoolChoiceService().audit(instance, lottery)

        if options['json']:
            self.stdout.write(json.dumps(report_to_document(report), indent=2, ensure_ascii=False))
        else:
            self.show_report(report)

        if not report.passed:
            self.fail('Audit failed: the lottery is not ex ante stable with ETE and no easic', returncode=EXIT_AUDIT_FAILED)
        self.stdout.write(self.style.SUCCESS('Audit passed'))

    def show_report(self, report):
        rows = []

        witness = report.ex_ante_witness
        rows.append(('ex ante stable', report.ex_ante_stable,
                     '' if witness is None else
                     f"{witness.student} envies {witness.rival} at {witness.school} "
                     f"(matchings {witness.envious_matching}, {witness.envied_matching})"))

        witness = report.ex_post_witness
        rows.append(('ex post stable', report.ex_post_stable,
                     '' if witness is None else
                     f"matching {witness.matching_index}: {witness.witness.student} envies "
                     f"{witness.witness.rival} at {witness.witness.school}"))

        witness = report.ete_witness
        rows.append(('ETE', report.ete_satisfied,
                     '' if witness is None else
                     f"{witness.student} and {witness.other} differ at {witness.school}"))

        if not report.easic_checked:
            rows.append(('no easic', 'n/a', 'not checked: lottery is not ex ante stable'))
        else:
            rows.append(('no easic', report.easic is None,
                         '' if report.easic is None else
                         ' -> '.join(f"({s}, {c})" for s, c in report.easic)))

        frame = pd.DataFrame(rows, columns=['check', 'holds', 'witness']).set_index('check')
        self.stdout.write(frame.to_string())
