import json

from recognition.linear import INF
from recognition.management.base import RecognitionCommand
from recognition.observations import read_observations
from recognition.recognizer import goal_ids, read_hypotheses
from recognition.sas import format_partial_state, load_task, without_goal
from recognition.search import goal_oracles


class Command(RecognitionCommand):
    help = 'Compute exact optimal and observation-complying plan costs for every hypothesis'

    def add_arguments(self, parser):
        parser.add_argument('--task', required=True)
        parser.add_argument('--hyps', required=True)
        parser.add_argument('--obs', required=True)
        parser.add_argument('--max-expansions', type=int, default=None)
        parser.add_argument('--out', help='JSON output path (default: stdout)')

    def run(self, *args, **options):
        task = without_goal(load_task(options['task']))
        hyps = read_hypotheses(task, options['hyps'])
        omega = read_observations(options['obs'])
        oracles = goal_oracles(task, hyps, omega, options['max_expansions'])

        rows = []
        for goal_id, oracle in zip(goal_ids(len(hyps)), oracles):
            rows.append({
                'goal': goal_id,
                'atoms': format_partial_state(task, oracle.goal),
                'h_star': None if oracle.h_star == INF else oracle.h_star,
                'h_star_omega': None if oracle.h_star_omega == INF else oracle.h_star_omega,
                'expanded': oracle.expanded,
                'time_ms': round(oracle.time_ms, 3),
            })
        self.write_output(json.dumps(rows, indent=2), options['out'])
