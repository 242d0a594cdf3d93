import random
from fractions import Fraction

from django.test import SimpleTestCase, override_settings

from recognition.domains import grid_task
from recognition.exceptions import InputError, ResourceLimit, Unsolvable
from recognition.observations import ObservationSequence, sample_observations
from recognition.sas import PartialState, Plan, validate_plan
from recognition.search import (
    cost_difference_solution_set, cost_ratio, exact_cost_diff_solution_set, goal_oracles, optimal_complying_cost,
    optimal_cost, reference_solution_set, weighted_plan,
)
from recognition.tests.helpers import (
    INF, bfs_distance, brute_force_complying_cost, dead_end_task, grid_fixture, moves, pos, random_instances,
)

GAMMA_PLAN = moves('c0', 'c3', 'c4', 'c1', 'c2', 'c5', 'c8', 'c7')


class OptimalCostTest(SimpleTestCase):
    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.task = grid_fixture()

    def test_goal_holds_initially(self):
        result = optimal_cost(self.task, pos(self.task, 'c0'))
        self.assertEqual(result.cost, 0)
        self.assertEqual(result.plan, Plan())

    def test_missing_goal_is_trivially_satisfied(self):
        self.assertEqual(optimal_cost(self.task, None).cost, 0)

    def test_unreachable_goal(self):
        result = optimal_cost(dead_end_task(), PartialState(((1, 1),)))
        self.assertEqual(result.cost, INF)
        self.assertFalse(result.solved)

    def test_matches_breadth_first_distance(self):
        for name in self.task.variables[0].value_names:
            goal = pos(self.task, name)
            result = optimal_cost(self.task, goal)
            self.assertEqual(result.cost, bfs_distance(self.task, goal))
            self.assertTrue(validate_plan(self.task, goal, result.plan).valid)

    def test_search_is_deterministic(self):
        goal = pos(self.task, 'c8')
        self.assertEqual(optimal_cost(self.task, goal).plan, optimal_cost(self.task, goal).plan)

    def test_expansion_limit(self):
        with self.assertRaises(ResourceLimit):
            optimal_cost(self.task, pos(self.task, 'c8'), max_expansions=1)

    @override_settings(RECOGNITION_SEARCH_MAX_EXPANSIONS=1_000_000)
    def test_zero_limits_are_not_defaults(self):
        with self.assertRaises(ResourceLimit):
            optimal_cost(self.task, pos(self.task, 'c8'), max_expansions=0)
        task = grid_task(20, 20)
        with self.assertRaises(ResourceLimit):
            optimal_cost(task, pos(task, 'c399'), time_limit=0)

    @override_settings(RECOGNITION_SEARCH_MAX_EXPANSIONS=2)
    def test_expansion_limit_from_settings(self):
        with self.assertRaises(ResourceLimit):
            optimal_complying_cost(self.task, pos(self.task, 'c8'), ObservationSequence(GAMMA_PLAN.steps))


class ComplyingCostTest(SimpleTestCase):
    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.task = grid_fixture()
        cls.g1 = pos(cls.task, 'c7')
        cls.g2 = pos(cls.task, 'c5')

    def test_full_observation_costs(self):
        """With the whole detour observed, c7 costs 7 and c5 costs 9"""
        omega = ObservationSequence(GAMMA_PLAN.steps)
        self.assertEqual(optimal_complying_cost(self.task, self.g1, omega).cost, 7)
        self.assertEqual(optimal_complying_cost(self.task, self.g2, omega).cost, 9)
        self.assertEqual(optimal_cost(self.task, self.g1).cost, 3)
        self.assertEqual(optimal_cost(self.task, self.g2).cost, 3)

    def test_empty_observations_give_optimal_cost(self):
        for name in self.task.variables[0].value_names:
            goal = pos(self.task, name)
            self.assertEqual(optimal_complying_cost(self.task, goal, ObservationSequence()).cost,
                             optimal_cost(self.task, goal).cost)

    def test_unknown_label_is_unexplainable(self):
        omega = ObservationSequence(('fly c0 c8',))
        self.assertEqual(optimal_complying_cost(self.task, self.g1, omega).cost, INF)

    def test_plan_found_complies(self):
        omega = ObservationSequence(('move c3 c4', 'move c8 c7'))
        result = optimal_complying_cost(self.task, self.g2, omega)
        self.assertEqual(result.cost, 7)
        self.assertTrue(validate_plan(self.task, self.g2, result.plan).valid)

    def test_strict_consumption_agrees_with_optional(self):
        for task, goals, plan in random_instances(3, 10, operators=6):
            omega = sample_observations(plan, 0.5, random.Random(len(plan)))
            for goal in goals:
                self.assertEqual(
                    optimal_complying_cost(task, goal, omega).cost,
                    optimal_complying_cost(task, goal, omega, strict_consume=False).cost,
                )

    def test_agrees_with_exhaustive_enumeration(self):
        """Compiled search equals brute-force enumeration of short complying plans"""
        rng = random.Random(2024)
        for task, goals, plan in random_instances(11, 20, operators=5):
            omega = sample_observations(plan, 0.5, rng)
            if rng.random() < 0.5:
                omega = ObservationSequence((rng.choice(task.labels),) + omega.labels)
            for goal in goals:
                expected = brute_force_complying_cost(task, goal, omega, max_cost=8)
                found = optimal_complying_cost(task, goal, omega).cost
                if found <= 8:
                    self.assertEqual(found, expected)
                else:
                    self.assertEqual(expected, INF)


class WeightedPlanTest(SimpleTestCase):
    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.task = grid_fixture()

    def test_weight_one_is_optimal(self):
        for name in ('c8', 'c5', 'c6'):
            goal = pos(self.task, name)
            self.assertEqual(weighted_plan(self.task, goal, w=1).cost, optimal_cost(self.task, goal).cost)

    def test_bounded_suboptimality(self):
        for task, goals, _ in random_instances(5, 10):
            for goal in goals:
                result = weighted_plan(task, goal, w=2)
                self.assertLessEqual(result.cost, 2 * optimal_cost(task, goal).cost)
                self.assertTrue(validate_plan(task, goal, result.plan).valid)

    def test_deterministic(self):
        goal = pos(self.task, 'c7')
        self.assertEqual(weighted_plan(self.task, goal).plan, weighted_plan(self.task, goal).plan)

    def test_unsolvable(self):
        with self.assertRaises(Unsolvable):
            weighted_plan(dead_end_task(), PartialState(((1, 1),)))

    def test_weight_below_one(self):
        with self.assertRaises(ValueError):
            weighted_plan(self.task, pos(self.task, 'c8'), w=0.5)


class SolutionSetTest(SimpleTestCase):
    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.task = grid_fixture()

    def test_cost_ratio(self):
        self.assertEqual(cost_ratio(0, 0), 1)
        self.assertEqual(cost_ratio(3, 0), INF)
        self.assertEqual(cost_ratio(7, 3), Fraction(7, 3))
        self.assertEqual(cost_ratio(INF, 3), INF)
        self.assertEqual(cost_ratio(3, INF), INF)

    def test_reference_set_of_detour(self):
        """The detour to c7 explains its observations no worse than itself; c5 does not"""
        g1, g2 = pos(self.task, 'c7'), pos(self.task, 'c5')
        omega = ObservationSequence(GAMMA_PLAN.steps)
        self.assertEqual(reference_solution_set(self.task, [g1, g2], omega, GAMMA_PLAN, g1), {g1})

    def test_reference_plan_must_reach_goal(self):
        with self.assertRaises(InputError):
            reference_solution_set(self.task, [pos(self.task, 'c5')], ObservationSequence(),
                                   GAMMA_PLAN, pos(self.task, 'c5'))

    def test_reference_set_contains_reference_goal(self):
        rng = random.Random(9)
        for task, goals, plan in random_instances(17, 15, hypotheses=3):
            omega = sample_observations(plan, rng.choice((0.3, 0.5, 1)), rng)
            self.assertIn(goals[0], reference_solution_set(task, goals, omega, plan, goals[0]))

    def test_cost_difference_of_partial_observation(self):
        """One observed step towards c8 singles out c8 over c1"""
        g1, g2 = pos(self.task, 'c8'), pos(self.task, 'c1')
        omega = ObservationSequence(('move c3 c4',))
        oracles = goal_oracles(self.task, [g1, g2], omega)
        self.assertEqual([(o.h_star_omega, o.h_star) for o in oracles], [(4, 4), (3, 1)])
        self.assertEqual(exact_cost_diff_solution_set(self.task, [g1, g2], omega), {g1})

    def test_symmetric_goals_tie(self):
        goals = [pos(self.task, 'c2'), pos(self.task, 'c6')]
        self.assertEqual(exact_cost_diff_solution_set(self.task, goals, ObservationSequence()), set(goals))

    def test_cost_difference_from_given_values(self):
        self.assertEqual(cost_difference_solution_set({'g1': (13, 3), 'g2': (11, 3)}), (8, {'g2'}))
        self.assertEqual(cost_difference_solution_set({'g1': (7, 3), 'g2': (9, 3)}), (4, {'g1'}))

    def test_cost_difference_skips_infinite(self):
        self.assertEqual(cost_difference_solution_set({'g1': (INF, 3), 'g2': (5, 4)}), (1, {'g2'}))
        self.assertEqual(cost_difference_solution_set({'g1': (INF, 3)}), (INF, frozenset()))

    def test_cost_difference_tolerance(self):
        delta, solution = cost_difference_solution_set({'a': (4.0, 1.0), 'b': (4.0000001, 1.0)}, tolerance=1e-6)
        self.assertEqual(delta, 3.0)
        self.assertEqual(solution, {'a', 'b'})
