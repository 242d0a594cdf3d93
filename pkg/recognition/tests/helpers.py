"""
Independent oracles and hand-encoded tasks shared by the test modules.
"""

import itertools
import math
import random
from collections import deque
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

from recognition.domains import blocks_hypotheses, blocks_task, grid_task, random_goal, random_task
from recognition.observations import ObservationSequence, complies
from recognition.sas import (
    CompleteState, Operator, PartialState, Plan, Task, Variable, apply, applicable, load_task, parse_partial_state,
)
from recognition.search import optimal_cost

FIXTURES = Path(__file__).resolve().parent / 'fixtures'

INF = math.inf


def grid_fixture() -> Task:
    return load_task(FIXTURES / 'grid3x3.sas')


def pos(task: Task, value_name: str) -> PartialState:
    """Goal ``pos=<value_name>`` for single-variable tasks."""
    return PartialState(((0, task.variables[0].value_names.index(value_name)),))


def moves(*cells: str) -> Plan:
    """Plan visiting ``cells`` in order on the grid."""
    return Plan(tuple(f'move {a} {b}' for a, b in zip(cells, cells[1:])))


def path_task(edges: Sequence[Tuple[str, str, str]], nodes: Sequence[str], start: str) -> Task:
    """Single-variable task; each edge is (label, from, to)."""
    index = {node: i for i, node in enumerate(nodes)}
    operators = tuple(
        Operator(label, PartialState(((0, index[a]),)), PartialState(((0, index[b]),)))
        for label, a, b in edges
    )
    return Task((Variable('pos', len(nodes), tuple(nodes)),), operators, CompleteState((index[start],)))


def landmark_example_task() -> Task:
    """
    Two observed operators, each reachable through its own family of achievers:
    o1 (p -> q) needs p, added by o2, o3 or o4; o5 (r -> u) needs r, added
    by o6 or o7. The goal G is entered from q or from t.
    """
    nodes = ['a', 'p', 'x', 'y', 'q', 'G', 't', 'k1', 'k2', 'z', 'w', 'r', 'u']
    edges = [
        ('o1', 'p', 'q'), ('o2', 'a', 'p'), ('o3', 'x', 'p'), ('o4', 'y', 'p'),
        ('o5', 'r', 'u'), ('o6', 'z', 'r'), ('o7', 'w', 'r'),
        ('a-x', 'a', 'x'), ('a-y', 'a', 'y'), ('q-g', 'q', 'G'), ('t-g', 't', 'G'),
        ('a-k1', 'a', 'k1'), ('k1-k2', 'k1', 'k2'), ('k2-z', 'k2', 'z'), ('k2-w', 'k2', 'w'),
        ('u-t', 'u', 't'),
    ]
    return path_task(edges, nodes, 'a')


def dead_end_task() -> Task:
    """Two variables; ``flag=on`` can never be reached."""
    variables = (
        Variable('pos', 2, ('left', 'right')),
        Variable('flag', 2, ('off', 'on')),
    )
    operators = (
        Operator('go-right', PartialState(((0, 0),)), PartialState(((0, 1),))),
        Operator('go-left', PartialState(((0, 1),)), PartialState(((0, 0),))),
    )
    return Task(variables, operators, CompleteState((0, 0)))


def bfs_distance(task: Task, goal: PartialState) -> Optional[int]:
    """Breadth-first distance to ``goal``; None when unreachable."""
    start = task.initial_state
    seen = {start}
    frontier = deque([(start, 0)])
    while frontier:
        state, depth = frontier.popleft()
        if goal.holds_in(state):
            return depth
        for op in task.operators:
            if applicable(state, op):
                child = apply(state, op)
                if child not in seen:
                    seen.add(child)
                    frontier.append((child, depth + 1))
    return None


def brute_force_complying_cost(task: Task, goal: PartialState, omega: ObservationSequence,
                               max_cost: int) -> float:
    """Cheapest plan of at most ``max_cost`` unit steps reaching ``goal`` and complying with ``omega``."""
    best = INF
    # (state, greedily matched prefix) -> fewest steps seen
    reached = {}

    def extend(state: CompleteState, steps: List[str], matched: int):
        nonlocal best
        if len(steps) >= best:
            return
        if goal.holds_in(state) and complies(Plan(tuple(steps)), omega):
            best = len(steps)
            return
        if len(steps) == max_cost or reached.get((state, matched), INF) <= len(steps):
            return
        reached[state, matched] = len(steps)
        for op in task.operators:
            if applicable(state, op):
                steps.append(op.label)
                advanced = matched + (matched < len(omega) and omega[matched] == op.label)
                extend(apply(state, op), steps, advanced)
                steps.pop()

    extend(task.initial_state, [], 0)
    return best


def monotone_map_exists(plan: Plan, omega: ObservationSequence) -> bool:
    """Exhaustive search for a strictly increasing embedding of ``omega`` into ``plan``."""
    return any(
        all(plan[i] == label for i, label in zip(indices, omega))
        for indices in itertools.combinations(range(len(plan)), len(omega))
    )


def random_instances(seed: int, count: int, hypotheses: int = 2, **task_options):
    """
    Seeded random tasks with reachable, non-trivial hypotheses.

    Yields (task, hypotheses, reference plan); the first hypothesis is the
    one the plan reaches.
    """
    rng = random.Random(seed)
    produced = 0
    while produced < count:
        task = random_task(rng, **task_options)
        goals, plans = [], []
        for _ in range(hypotheses * 4):
            goal = random_goal(rng, task)
            if goal in goals or goal.holds_in(task.initial_state):
                continue
            result = optimal_cost(task, goal)
            if result.solved:
                goals.append(goal)
                plans.append(result.plan)
            if len(goals) == hypotheses:
                break
        if len(goals) == hypotheses:
            produced += 1
            yield task, goals, plans[0]


def suite_tasks():
    """The grid fixture with corner goals, as (task, hypotheses, reference plan)."""
    task = grid_task(3, 3)
    goals = [pos(task, 'c8'), pos(task, 'c2'), pos(task, 'c6')]
    return task, goals, optimal_cost(task, goals[0]).plan


def blocks_fixture():
    """Three blocks with the four tower hypotheses, as (task, hypotheses, reference plan)."""
    task = blocks_task([['a', 'b'], ['c']])
    goals = [parse_partial_state(task, line) for line in blocks_hypotheses(['a', 'b', 'c'])]
    return task, goals, optimal_cost(task, goals[0]).plan


def landmark_example_suite():
    """The landmark example task with goals G and u, as (task, hypotheses, reference plan)."""
    task = landmark_example_task()
    goals = [pos(task, 'G'), pos(task, 'u')]
    return task, goals, optimal_cost(task, goals[0]).plan


def fixture_suites():
    return [suite_tasks(), blocks_fixture(), landmark_example_suite()]
