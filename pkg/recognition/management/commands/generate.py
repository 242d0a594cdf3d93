from recognition.dataset import SEQUENCES_PER_LEVEL, generate_dataset
from recognition.management.base import RecognitionCommand


class Command(RecognitionCommand):
    help = 'Generate a goal recognition dataset from a directory of domain tasks'

    def add_arguments(self, parser):
        parser.add_argument('--domain-dir', required=True,
                            help='One sub-directory per domain holding <task>.sas and <task>.hyps.txt')
        parser.add_argument('--out', required=True, help='Dataset directory to create')
        parser.add_argument('--suboptimal', action='store_true', help='Generate plans with weighted A* (w=2)')
        parser.add_argument('--noise', action='store_true', help='Also write obs_noisy.txt')
        parser.add_argument('--seed', type=int, default=0)
        parser.add_argument('--goals-per-task', type=int, default=4)
        parser.add_argument('--sequences', type=int, default=SEQUENCES_PER_LEVEL,
                            help='Observation sequences per level below 100%%')
        parser.add_argument('--observabilities', type=int, nargs='+', default=None)

    def run(self, *args, **options):
        manifest = generate_dataset(
            options['domain_dir'],
            options['out'],
            suboptimal=options['suboptimal'],
            noise=options['noise'],
            seed=options['seed'],
            observabilities=options['observabilities'],
            goals_per_task=options['goals_per_task'],
            sequences=options['sequences'],
        )
        self.stdout.write(self.style.SUCCESS(f'Generated {len(manifest.instances)} problems in {options["out"]}'))
        if manifest.skipped:
            self.stdout.write(self.style.WARNING(f'Skipped {len(manifest.skipped)} (see manifest.json)'))
