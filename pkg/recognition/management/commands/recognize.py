from django.core.management.base import CommandError

from recognition.counting import HEURISTICS, IMPROVED
from recognition.landmarks import GOAL_ORIGIN, LandmarkSet, dump, extract_landmarks, observation_landmarks
from recognition.linear import BACKENDS, MODES, LP
from recognition.management.base import EXIT_INPUT_ERROR, RecognitionCommand
from recognition.observations import NoiseSpec, read_observations
from recognition.recognizer import read_hypotheses, recognize, result_to_json
from recognition.sas import load_task, without_goal


class Command(RecognitionCommand):
    help = 'Recognize the goal hypotheses that best explain an observation sequence'

    def add_arguments(self, parser):
        parser.add_argument('--task', required=True, help='SAS (or .json) task without goal')
        parser.add_argument('--hyps', required=True, help='Hypothesis file, one goal per line')
        parser.add_argument('--obs', required=True, help='Observation file, one label per line')
        parser.add_argument('--eps', default='0', help='Unreliability rating in [0, 1]')
        parser.add_argument('--heuristic', choices=HEURISTICS, default=IMPROVED)
        parser.add_argument('--mode', choices=MODES, default=LP)
        parser.add_argument('--backend', choices=BACKENDS, default=None)
        parser.add_argument('--exact', action='store_true', help='Rational arithmetic (simplex backend)')
        parser.add_argument('--landmarks', action='store_true', help='Also print extracted landmarks')
        parser.add_argument('--out', help='Result JSON path (default: stdout)')

    def run(self, *args, **options):
        try:
            eps = NoiseSpec.coerce(options['eps'])
        except ValueError as exc:
            raise CommandError(str(exc), returncode=EXIT_INPUT_ERROR) from exc
        task = without_goal(load_task(options['task']))
        hyps = read_hypotheses(task, options['hyps'])
        omega = read_observations(options['obs'])

        if options['landmarks']:
            s0 = task.initial_state
            sets = [extract_landmarks(task, goal, s0, GOAL_ORIGIN) for goal in hyps]
            sets.append(observation_landmarks(task, omega, s0))
            self.stdout.write(dump(LandmarkSet.combine(sets)), ending='')

        result = recognize(task, hyps, omega, eps, heuristic=options['heuristic'], mode=options['mode'],
                           backend=options['backend'], exact=options['exact'])
        self.write_output(result_to_json(result), options['out'])
        self.stdout.write(self.style.SUCCESS(
            f"Recognized {', '.join(result.ordered_solution)} (delta_min = {result.delta_min})"))
