from school_choice.management.base import SchoolChoiceCommand
from school_choice.serializers import matching_frame
from school_choice.services import SchoolChoiceService


class Command(SchoolChoiceCommand):
    help = 'Muestrear matchings de la reasignación ETE de una lotería'

    def add_arguments(self, parser):
        self.add_instance_argument(parser)
        parser.add_argument('lottery', type=str, help='Archivo JSON de la lotería')
        parser.add_argument('--seed', type=int, default=0)
        parser.add_argument('--count', type=int, default=1)

    def handle(self, *args, **options):
        instance = self.load_instance(options)
        lottery = self.load_lottery(options['lottery'], instance.problem)
        try:
            draws = SchoolChoiceService().sample(instance, lottery, options['seed'], options['count'])
        except ValueError as e:
            self.fail(str(e))

        labels = [f"draw{k}" for k in range(1, len(draws) + 1)]
        self.stdout.write(matching_frame(instance.problem, draws, labels).to_string())
