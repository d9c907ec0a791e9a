"""
Comando para construir la lotería ex ante estable con ETE de una instancia
"""

import pandas as pd

from school_choice.exceptions import SchoolChoiceError
from school_choice.management.base import EXIT_SUPPORT_TOO_LARGE, SchoolChoiceCommand
from school_choice.serializers import (
    format_fraction,
    marginals_frame,
    matching_frame,
    write_lottery,
    write_marginals,
)
from school_choice.services import SchoolChoiceService


class Command(SchoolChoiceCommand):
    help = 'Matching constrained efficient + reasignación ETE: escribe la lotería y sus marginales'

    def add_arguments(self, parser):
        self.add_instance_argument(parser)
        parser.add_argument(
            '--tie-break',
            nargs='+',
            default=['auto'],
            help='auto | input-order | declared | seed N (también seed:N); por defecto auto',
        )
        parser.add_argument('--out', type=str, help='Archivo JSON para la lotería (forma soporte)')
        parser.add_argument('--marginals-out', type=str, help='Archivo CSV para la matriz de marginales')
        parser.add_argument('--support-limit', type=int, help='Límite de L para la forma soporte')

    def handle(self, *args, **options):
        instance = self.load_instance(options)
        problem = instance.problem
        service = SchoolChoiceService(support_limit=options['support_limit'])
        tie_break = options['tie_break']
        if not isinstance(tie_break, str):
            tie_break = ' '.join(tie_break)

        try:
            result = service.solve(instance, tie_break=tie_break)
        except (SchoolChoiceError, ValueError) as e:
            self.fail(f"Cannot solve: {e}")

        self.stdout.write(self.style.SUCCESS(
            f"Constrained efficient matching ({result.tie_break.mode} tie-break)"
        ))
        self.stdout.write(matching_frame(problem, [result.matching], ['mu*']).to_string())
        self.stdout.write('')
        self.stdout.write(f"Groups of equals (N={result.groups.size}, L={result.support_size}):")
        for g, members in enumerate(result.groups.labels(problem), start=1):
            self.stdout.write(f"  I_{g}: {', '.join(members)}")
        self.stdout.write('')

        if options['marginals_out']:
            write_marginals(options['marginals_out'], problem, result.marginals)
            self.stdout.write(self.style.SUCCESS(f"Marginals written to {options['marginals_out']}"))
        else:
            self.stdout.write('Marginals:')
            self.stdout.write(marginals_frame(problem, result.marginals).to_string())

        if result.lottery is None:
            message = (
                f"ETE reassignment support exceeds the limit (L={result.support_size}); "
                "only marginals were produced"
            )
            if options['out']:
                self.fail(message, returncode=EXIT_SUPPORT_TOO_LARGE)
            self.stdout.write(self.style.WARNING(message))
            return

        if options['out']:
            write_lottery(options['out'], problem, result.lottery)
            self.stdout.write(self.style.SUCCESS(
                f"Lottery with {len(result.lottery.support)} matchings written to {options['out']}"
            ))
        else:
            self.stdout.write('')
            self.stdout.write('Lottery:')
            frame = matching_frame(
                problem,
                list(result.lottery.matchings),
                [f"m{k}" for k in range(1, len(result.lottery.support) + 1)],
            )
            weights = pd.DataFrame(
                [[format_fraction(p) for _, p in result.lottery.support]],
                index=pd.Index(['probability'], name='student'),
                columns=frame.columns,
            )
            self.stdout.write(pd.concat([frame, weights]).to_string())
