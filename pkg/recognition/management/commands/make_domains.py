import random
from pathlib import Path

from recognition.domains import (
    blocks_hypotheses, blocks_task, cross_hypotheses, cross_task, grid_hypotheses, grid_task, random_goal,
    random_task, switches_hypotheses, switches_task,
)
from recognition.management.base import RecognitionCommand
from recognition.sas import format_partial_state, serialize_sas


class Command(RecognitionCommand):
    help = 'Write grid, corridor, switch-board, blocks-world and random tasks as a domain directory for generate'

    def add_arguments(self, parser):
        parser.add_argument('--out', required=True)
        parser.add_argument('--grids', nargs='*', default=[], help='WIDTHxHEIGHT per open grid task')
        parser.add_argument('--blocks', nargs='*', type=int, default=[], help='Block count per task')
        parser.add_argument('--crosses', nargs='*', type=int, default=[2, 3], help='Arm length per corridor cross')
        parser.add_argument('--switches', nargs='*', type=int, default=[6, 8], help='Lamp count per switch board')
        parser.add_argument('--random', type=int, default=0, help='Number of random tasks')
        parser.add_argument('--seed', type=int, default=0)

    def _write(self, directory: Path, name: str, task, hypotheses):
        directory.mkdir(parents=True, exist_ok=True)
        (directory / f'{name}.sas').write_text(serialize_sas(task), encoding='utf-8')
        (directory / f'{name}.hyps.txt').write_text('\n'.join(hypotheses) + '\n', encoding='utf-8')
        self.stdout.write(f'  {directory.name}/{name}: {len(task.operators)} operators')

    def run(self, *args, **options):
        out = Path(options['out'])

        for spec in options['grids']:
            width, height = (int(n) for n in spec.lower().split('x'))
            self._write(out / 'grid', f'grid-{width}x{height}', grid_task(width, height),
                        grid_hypotheses(width, height))

        for arm in options['crosses']:
            self._write(out / 'grid', f'cross-{arm}', cross_task(arm), cross_hypotheses(arm))

        for count in options['switches']:
            self._write(out / 'switches', f'switches-{count}', switches_task(count), switches_hypotheses(count))

        for count in options['blocks']:
            blocks = [chr(ord('a') + i) for i in range(count)]
            # One initial tower per block, all on the table.
            task = blocks_task([[b] for b in blocks])
            self._write(out / 'blocks', f'blocks-{count}', task, blocks_hypotheses(blocks))

        rng = random.Random(options['seed'])
        for number in range(options['random']):
            task = random_task(rng)
            goals = [format_partial_state(task, random_goal(rng, task)) for _ in range(4)]
            self._write(out / 'random', f'random-{number}', task, goals)

        self.stdout.write(self.style.SUCCESS(f'Domains written to {out}'))
