"""
Search oracles over the explicit state space.

``optimal_cost`` and ``optimal_complying_cost`` are uniform-cost searches;
the latter runs over (state, matched observations) pairs. ``weighted_plan``
is weighted A* guided by the goal landmark LP. Successors are generated in
label order and ties broken by generation order, so every search is
deterministic.
"""

import heapq
import logging
import math
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Hashable, Iterable, Iterator, List, Mapping, NamedTuple, Optional, Sequence, Tuple

from django.conf import settings

from .counting import admissible_estimate
from .exceptions import InputError, ResourceLimit, Unsolvable
from .observations import ObservationSequence, as_fraction
from .sas import CompleteState, PartialState, Plan, Task, validate_plan

logger = logging.getLogger(__name__)

INF = math.inf


@dataclass(frozen=True)
class SearchResult:
    """
    Attributes:
        cost: plan cost, or infinity when no plan exists
        plan: the plan found (None when cost is infinite)
        expanded: states expanded
        generated: successor states generated
    """
    cost: float
    plan: Optional[Plan]
    expanded: int = 0
    generated: int = 0
    elapsed: float = 0.0

    @property
    def solved(self) -> bool:
        return self.plan is not None


class CompiledComplianceState(NamedTuple):
    base: CompleteState
    matched: int


class _Budget:
    def __init__(self, max_expansions: Optional[int], time_limit: Optional[float]):
        if max_expansions is None:
            max_expansions = getattr(settings, 'RECOGNITION_SEARCH_MAX_EXPANSIONS', 1_000_000)
        if time_limit is None:
            time_limit = getattr(settings, 'RECOGNITION_SEARCH_TIME_LIMIT', 60.0)
        self.max_expansions = max_expansions
        self.time_limit = time_limit
        self.started = time.monotonic()

    def check(self, expanded: int):
        if expanded > self.max_expansions:
            raise ResourceLimit(f'search exceeded {self.max_expansions} expansions')
        if expanded % 256 == 0 and time.monotonic() - self.started > self.time_limit:
            raise ResourceLimit(f'search exceeded {self.time_limit:.0f}s')

    @property
    def elapsed(self) -> float:
        return time.monotonic() - self.started


def _best_first(start: Hashable,
                successors: Callable[[Hashable], Iterable[Tuple[str, int, Hashable]]],
                is_goal: Callable[[Hashable], bool],
                budget: _Budget,
                estimate: Optional[Callable[[Hashable], float]] = None,
                weight=1) -> SearchResult:
    """
    Best-first search with reopening.

    Without ``estimate`` this is uniform-cost search; with one it is weighted
    A* ordering nodes by g + weight * h. States with an infinite estimate are
    pruned.
    """
    counter = 0
    best_g: Dict[Hashable, int] = {start: 0}
    parent: Dict[Hashable, Tuple[Hashable, str]] = {}
    h0 = estimate(start) if estimate else 0
    if h0 == INF:
        return SearchResult(INF, None, 0, 0, budget.elapsed)
    open_list = [(weight * h0, counter, 0, start)]
    expanded = generated = 0
    while open_list:
        _, _, g, node = heapq.heappop(open_list)
        if g > best_g[node]:
            continue
        if is_goal(node):
            steps = []
            while node in parent:
                node, label = parent[node]
                steps.append(label)
            result = SearchResult(g, Plan(tuple(reversed(steps))), expanded, generated, budget.elapsed)
            logger.debug('search finished: cost=%s expanded=%d generated=%d', g, expanded, generated)
            return result
        expanded += 1
        budget.check(expanded)
        for label, cost, child in successors(node):
            generated += 1
            child_g = g + cost
            if child_g >= best_g.get(child, INF):
                continue
            h = estimate(child) if estimate else 0
            if h == INF:
                continue
            best_g[child] = child_g
            parent[child] = (node, label)
            counter += 1
            heapq.heappush(open_list, (child_g + weight * h, counter, child_g, child))
    logger.debug('search exhausted: expanded=%d generated=%d', expanded, generated)
    return SearchResult(INF, None, expanded, generated, budget.elapsed)


def _state_successors(task: Task):
    def successors(state: CompleteState) -> Iterator[Tuple[str, int, CompleteState]]:
        for op, child in task.successors(state):
            yield op.label, op.cost, child
    return successors


def _goal_test(g: Optional[PartialState]):
    if g is None:
        return lambda state: True
    return g.holds_in


def optimal_cost(task: Task, g: Optional[PartialState], max_expansions: Optional[int] = None,
                 time_limit: Optional[float] = None) -> SearchResult:
    """Uniform-cost search for an optimal plan reaching ``g``."""
    budget = _Budget(max_expansions, time_limit)
    return _best_first(task.initial_state, _state_successors(task), _goal_test(g), budget)


def optimal_complying_cost(task: Task, g: Optional[PartialState], omega: ObservationSequence,
                           max_expansions: Optional[int] = None, time_limit: Optional[float] = None,
                           strict_consume: bool = True) -> SearchResult:
    """
    Uniform-cost search for an optimal plan reaching ``g`` that complies with ``omega``.

    Applying an operator whose label is the next unmatched observation
    consumes that observation. With ``strict_consume`` off, the
    non-consuming transition is generated as well.
    """
    if omega.unknown_labels(task):
        return SearchResult(INF, None)
    budget = _Budget(max_expansions, time_limit)
    observed = omega.labels
    goal_holds = _goal_test(g)

    def successors(node: CompiledComplianceState):
        state, matched = node
        for op, child in task.successors(state):
            if matched < len(observed) and op.label == observed[matched]:
                yield op.label, op.cost, CompiledComplianceState(child, matched + 1)
                if strict_consume:
                    continue
            yield op.label, op.cost, CompiledComplianceState(child, matched)

    def is_goal(node: CompiledComplianceState) -> bool:
        return node.matched == len(observed) and goal_holds(node.base)

    return _best_first(CompiledComplianceState(task.initial_state, 0), successors, is_goal, budget)


def weighted_plan(task: Task, g: Optional[PartialState], w=2, max_expansions: Optional[int] = None,
                  time_limit: Optional[float] = None) -> SearchResult:
    """Weighted A* with the rounded-up goal landmark LP as heuristic; cost <= w * optimal."""
    w = as_fraction(w)
    if w < 1:
        raise ValueError(f'weight must be at least 1, got {w}')
    goal = g if g is not None else PartialState()
    cache: Dict[CompleteState, float] = {}

    def estimate(state: CompleteState) -> float:
        if state not in cache:
            cache[state] = admissible_estimate(task, goal, state)
        return cache[state]

    budget = _Budget(max_expansions, time_limit)
    result = _best_first(task.initial_state, _state_successors(task), goal.holds_in, budget,
                         estimate, float(w))
    if not result.solved:
        raise Unsolvable('no plan reaches the goal')
    return result


# Ratios and solution sets

def cost_ratio(numerator, denominator):
    """numerator / denominator as a Fraction; 0/0 is 1 and x/0 is infinity."""
    if numerator == INF or denominator == INF:
        return INF
    if denominator == 0:
        return Fraction(1) if numerator == 0 else INF
    return Fraction(numerator) / Fraction(denominator)


def cost_difference_solution_set(values: Mapping[Hashable, Tuple[float, float]],
                                 tolerance: float = 0) -> Tuple[float, frozenset]:
    """
    Minimal cost difference and the goals attaining it.

    ``values`` maps each goal to (estimate with observations, estimate
    without). Goals whose first estimate is infinite are left out; when all
    are, the result is (infinity, empty set).
    """
    deltas = {key: h_omega - h for key, (h_omega, h) in values.items()
              if h_omega != INF and h != INF}
    if not deltas:
        return INF, frozenset()
    delta_min = min(deltas.values())
    return delta_min, frozenset(key for key, delta in deltas.items() if delta <= delta_min + tolerance)


@dataclass(frozen=True)
class GoalOracle:
    goal: PartialState
    h_star: float
    h_star_omega: float
    expanded: int
    time_ms: float


def goal_oracles(task: Task, goals: Sequence[PartialState], omega: ObservationSequence,
                 max_expansions: Optional[int] = None, time_limit: Optional[float] = None) -> List[GoalOracle]:
    """h* and the complying h* for every goal."""
    oracles = []
    for goal in goals:
        started = time.perf_counter()
        plain = optimal_cost(task, goal, max_expansions, time_limit)
        complying = optimal_complying_cost(task, goal, omega, max_expansions, time_limit)
        oracles.append(GoalOracle(
            goal, plain.cost, complying.cost,
            plain.expanded + complying.expanded,
            (time.perf_counter() - started) * 1000,
        ))
    return oracles


def reference_solution_set(task: Task, goals: Sequence[PartialState], omega: ObservationSequence,
                           reference_plan: Plan, reference_goal: PartialState,
                           max_expansions: Optional[int] = None,
                           time_limit: Optional[float] = None) -> frozenset:
    """
    Goals explaining ``omega`` at most as suboptimally as the reference agent.

    ``omega`` must already be stripped of noise. A goal qualifies when its
    complying optimal cost is finite and its ratio to the unrestricted optimum
    does not exceed cost(reference_plan) / h*(reference_goal).
    """
    check = validate_plan(task, reference_goal, reference_plan)
    if not check.valid:
        raise InputError('reference plan does not reach the reference goal')
    reference = optimal_cost(task, reference_goal, max_expansions, time_limit)
    bound = cost_ratio(check.cost, reference.cost)
    solution = set()
    for oracle in goal_oracles(task, goals, omega, max_expansions, time_limit):
        if oracle.h_star_omega == INF:
            continue
        if cost_ratio(oracle.h_star_omega, oracle.h_star) <= bound:
            solution.add(oracle.goal)
    return frozenset(solution)


def exact_cost_diff_solution_set(task: Task, goals: Sequence[PartialState], omega: ObservationSequence,
                                 max_expansions: Optional[int] = None,
                                 time_limit: Optional[float] = None) -> frozenset:
    """The cost-difference solution set computed from exact search costs."""
    oracles = goal_oracles(task, goals, omega, max_expansions, time_limit)
    _, solution = cost_difference_solution_set(
        {oracle.goal: (oracle.h_star_omega, oracle.h_star) for oracle in oracles})
    return solution
