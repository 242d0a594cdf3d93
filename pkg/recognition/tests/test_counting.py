import random
from fractions import Fraction

from django.test import SimpleTestCase

from recognition.counting import (
    BASE_SOURCES, IMPROVED, IMPROVED_SOURCES, UNRESTRICTED_SOURCES, add_observation_constraints,
    add_observation_landmark_constraints, admissible_estimate, build_heuristic_model, count_column, h_base, h_goal,
    h_improved, heuristic, observation_column, operator_model, plan_assignment,
)
from recognition.domains import cross_hypotheses, cross_task, switches_hypotheses, switches_task
from recognition.exceptions import MissingObservationColumn, UnknownLabel
from recognition.landmarks import OBSERVATION, Landmark, LandmarkSet, Origin
from recognition.linear import IP, LP
from recognition.observations import ObservationSequence, inject_noise, max_ignorable, sample_observations
from recognition.sas import PartialState, parse_partial_state
from recognition.search import optimal_complying_cost, optimal_cost
from recognition.tests.helpers import (
    INF, blocks_fixture, dead_end_task, grid_fixture, landmark_example_task, pos, random_instances, suite_tasks,
)

TOL = 1e-6


class ModelShapeTest(SimpleTestCase):
    def setUp(self):
        self.task = landmark_example_task()
        self.omega = ObservationSequence(('o1', 'o5'))

    def test_operator_columns(self):
        model = operator_model(self.task)
        self.assertEqual(model.column_names, [count_column(label) for label in self.task.labels])
        self.assertEqual(model.row_count, 0)

    def test_observation_rows(self):
        model = build_heuristic_model(BASE_SOURCES, self.task, pos(self.task, 'G'),
                                      self.task.initial_state, self.omega, 0.5)
        names = [row.name for row in model.rows]
        self.assertEqual(names, ['lm:0', 'obs-cap[o1]', 'obs-count[o1]', 'obs-cap[o5]', 'obs-count[o5]',
                                 'obs-total'])
        total = model.rows[-1]
        self.assertEqual(total.lower, 1)
        self.assertIn(observation_column('o5'), model.column_names)

    def test_observation_landmark_rows(self):
        """Each observed operator's achievers must cover its observation count"""
        model = build_heuristic_model(IMPROVED_SOURCES, self.task, pos(self.task, 'G'),
                                      self.task.initial_state, self.omega, 0.5)
        rows = {row.name: row for row in model.rows}
        self.assertEqual(model.row_count, 8)
        row = rows['obs-lm[o1]:0']
        index = model.column_index
        self.assertEqual(row.coefficients, {
            index('Y[o2]'): 1, index('Y[o3]'): 1, index('Y[o4]'): 1, index('YO[o1]'): -1,
        })
        self.assertEqual(row.lower, 0)
        self.assertIn('obs-lm[o5]:1', rows)

    def test_repeated_observation_scales_landmark_row(self):
        omega = ObservationSequence(('o1', 'o1'))
        model = build_heuristic_model(IMPROVED_SOURCES, self.task, pos(self.task, 'G'),
                                      self.task.initial_state, omega, 0)
        row = next(row for row in model.rows if row.name.startswith('obs-lm[o1]'))
        self.assertEqual(row.coefficients[model.column_index('YO[o1]')], Fraction(-1, 2))

    def test_unknown_observation(self):
        with self.assertRaises(UnknownLabel):
            add_observation_constraints(operator_model(self.task), ObservationSequence(('o99',)), 0)

    def test_landmark_without_observation_column(self):
        lms = LandmarkSet((Landmark({'o2'}, Origin(OBSERVATION, 'o1', 0)),))
        with self.assertRaises(MissingObservationColumn):
            add_observation_landmark_constraints(operator_model(self.task), lms, self.omega)

    def test_unreachable_observation_is_pinned_to_zero(self):
        task = dead_end_task()
        model = operator_model(task)
        model = add_observation_constraints(model, ObservationSequence(('go-left',)), 0)
        lms = LandmarkSet((), (Origin(OBSERVATION, 'go-left', 0),))
        model = add_observation_landmark_constraints(model, lms, ObservationSequence(('go-left',)))
        self.assertEqual(model.rows[-1].name, 'obs-unreachable[go-left]')
        self.assertEqual(model.rows[-1].upper, 0)

    def test_builders_do_not_mutate_input(self):
        model = operator_model(self.task)
        add_observation_constraints(model, self.omega, 0)
        self.assertEqual(model.row_count, 0)
        self.assertFalse(model.has_column(observation_column('o1')))


class HeuristicValueTest(SimpleTestCase):
    def test_landmark_example(self):
        """Half the observations may be noise: the improved heuristic still pays 3"""
        task = landmark_example_task()
        goal = pos(task, 'G')
        omega = ObservationSequence(('o1', 'o5'))
        for mode in (LP, IP):
            self.assertEqual(h_improved(task, goal, task.initial_state, omega, 0.5, mode=mode, exact=True).value, 3)
            self.assertEqual(h_base(task, goal, task.initial_state, omega, 0.5, mode=mode, exact=True).value, 2)
        self.assertEqual(h_goal(task, goal, task.initial_state, exact=True).value, 1)
        self.assertEqual(h_improved(task, goal, task.initial_state, omega, 0.5, mode=IP).value, 3)

    def test_goal_already_reached(self):
        task = grid_fixture()
        report = h_base(task, pos(task, 'c0'), task.initial_state, ObservationSequence(), 0)
        self.assertEqual(report.value, 0)
        self.assertTrue(report.is_finite)

    def test_repeated_observation_counts_twice(self):
        task = grid_fixture()
        omega = ObservationSequence(('move c0 c1', 'move c0 c1'))
        for fn in (h_base, h_improved):
            self.assertAlmostEqual(fn(task, pos(task, 'c1'), task.initial_state, omega, 0).value, 2, delta=TOL)

    def test_unreachable_goal_is_infinite(self):
        task = dead_end_task()
        report = h_improved(task, PartialState(((1, 1),)), task.initial_state, ObservationSequence(), 0)
        self.assertEqual(report.value, INF)
        self.assertFalse(report.is_finite)
        self.assertEqual(admissible_estimate(task, PartialState(((1, 1),)), task.initial_state), INF)

    def test_heuristic_lookup(self):
        self.assertIs(heuristic(IMPROVED), h_improved)
        with self.assertRaises(ValueError):
            heuristic('optimal')

    def test_exact_matches_float(self):
        task, goals, plan = suite_tasks()
        omega = sample_observations(plan, 0.5, random.Random(1))
        for goal in goals:
            exact = h_improved(task, goal, task.initial_state, omega, 0, exact=True).value
            approx = h_improved(task, goal, task.initial_state, omega, 0).value
            self.assertAlmostEqual(float(exact), approx, delta=TOL)

    def test_corridor_and_switch_goals_priced_exactly(self):
        tasks = [(cross_task(arm), cross_hypotheses(arm)) for arm in (2, 3)]
        tasks += [(switches_task(n), switches_hypotheses(n)) for n in (6, 8)]
        for task, lines in tasks:
            for line in lines:
                goal = parse_partial_state(task, line)
                self.assertEqual(h_goal(task, goal, task.initial_state, exact=True).value,
                                 optimal_cost(task, goal).cost, line)


class LowerBoundTest(SimpleTestCase):
    """Every heuristic stays below the cheapest plan explaining the observations."""

    def cases(self):
        rng = random.Random(31)
        for task, goals, plan in random_instances(13, 30):
            yield task, goals, plan, sample_observations(plan, rng.choice((0.1, 0.3, 0.5, 0.7, 1)), rng)
        for task, goals, plan in (suite_tasks(), blocks_fixture()):
            for ratio in (0.1, 0.3, 0.5, 0.7, 1):
                yield task, goals, plan, sample_observations(plan, ratio, rng)

    def test_bounded_by_complying_optimum(self):
        for task, goals, plan, omega in self.cases():
            for goal in goals:
                bound = optimal_complying_cost(task, goal, omega).cost
                for fn in (h_base, h_improved):
                    lp = fn(task, goal, task.initial_state, omega, 0, mode=LP).value
                    ip = fn(task, goal, task.initial_state, omega, 0, mode=IP).value
                    self.assertLessEqual(lp, ip + TOL)
                    self.assertLessEqual(ip, bound + TOL)

    def test_noisy_observations_within_budget(self):
        """Injected noise that eps can absorb keeps the bound on the clean observations"""
        rng = random.Random(5)
        for task, goals, plan in list(random_instances(29, 15)) + [suite_tasks(), blocks_fixture()]:
            clean = ObservationSequence(plan.steps)
            if set(task.labels) <= set(plan):
                continue
            noisy = inject_noise(clean, task, plan, rng, count=1)
            eps = Fraction(1, len(noisy))
            self.assertEqual(max_ignorable(noisy, eps), 1)
            for goal in goals:
                bound = optimal_complying_cost(task, goal, clean).cost
                for fn in (h_base, h_improved):
                    for mode in (LP, IP):
                        value = fn(task, goal, task.initial_state, noisy, eps, mode=mode).value
                        self.assertLessEqual(value, bound + TOL)

    def test_dominance_chain(self):
        for task, goals, plan, omega in self.cases():
            for goal in goals:
                plain = h_goal(task, goal, task.initial_state).value
                base = h_base(task, goal, task.initial_state, omega, 0).value
                improved = h_improved(task, goal, task.initial_state, omega, 0).value
                self.assertLessEqual(plain, base + TOL)
                self.assertLessEqual(base, improved + TOL)

    def test_plan_counts_satisfy_model(self):
        """A complying plan's operator counts are a feasible point of the improved model"""
        for task, goals, plan, omega in self.cases():
            model = build_heuristic_model(IMPROVED_SOURCES, task, goals[0], task.initial_state, omega, 0)
            assignment = plan_assignment(model, plan, omega)
            self.assertEqual(model.violations(assignment), [])
            self.assertEqual(assignment[count_column(plan[0])], plan.occurrences()[plan[0]])

    def test_admissible_estimate(self):
        task = grid_fixture()
        for name in ('c0', 'c4', 'c8'):
            goal = pos(task, name)
            self.assertLessEqual(admissible_estimate(task, goal, task.initial_state), optimal_cost(task, goal).cost)
        model = build_heuristic_model(UNRESTRICTED_SOURCES, task, pos(task, 'c8'), task.initial_state)
        self.assertEqual(model.row_count, 1)
