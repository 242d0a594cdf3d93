import io

from django.core.management.base import CommandError

from recognition.counting import HEURISTICS, IMPROVED
from recognition.dataset import run_benchmark
from recognition.linear import BACKENDS, MODES, LP
from recognition.management.base import EXIT_INPUT_ERROR, RecognitionCommand
from recognition.models import BenchmarkRun
from recognition.observations import NoiseSpec
from recognition.utils import export_report_xlsx, write_report_csv, write_report_json


class Command(RecognitionCommand):
    help = 'Run recognition over every problem of a dataset and write per-level reports'

    def add_arguments(self, parser):
        parser.add_argument('--dataset', required=True)
        parser.add_argument('--heuristic', choices=HEURISTICS, default=IMPROVED)
        parser.add_argument('--eps', default='0')
        parser.add_argument('--mode', choices=MODES, default=LP)
        parser.add_argument('--backend', choices=BACKENDS, default=None)
        parser.add_argument('--workers', type=int, default=None)
        parser.add_argument('--clean', action='store_true', help='Use obs.txt even when obs_noisy.txt exists')
        parser.add_argument('--out', help='CSV report path (default: stdout)')
        parser.add_argument('--json', dest='json_out', help='JSON report path')
        parser.add_argument('--xlsx', help='Excel report path')
        parser.add_argument('--record', action='store_true', help='Archive the run in the database')

    def run(self, *args, **options):
        try:
            eps = NoiseSpec.coerce(options['eps'])
        except ValueError as exc:
            raise CommandError(str(exc), returncode=EXIT_INPUT_ERROR) from exc
        report = run_benchmark(
            options['dataset'],
            heuristic=options['heuristic'],
            eps=eps.epsilon,
            mode=options['mode'],
            backend=options['backend'],
            workers=options['workers'],
            noisy=not options['clean'],
        )

        self.write_output(write_report_csv(report, io.StringIO()).getvalue(), options['out'])
        if options['json_out']:
            self.write_output(write_report_json(report, io.StringIO()).getvalue(), options['json_out'])
        if options['xlsx']:
            export_report_xlsx(report, options['xlsx'])
            self.stdout.write(self.style.SUCCESS(f"Wrote {options['xlsx']}"))
        if options['record']:
            run = BenchmarkRun.record(report, options['dataset'])
            self.stdout.write(self.style.SUCCESS(f'Archived run #{run.pk}'))
        self.stdout.write(self.style.SUCCESS(
            f'{len(report.instances)} problems, mean agreement {report.mean_agr:.4f}'))
