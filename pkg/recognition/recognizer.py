"""
End-to-end goal recognition with the cost-difference solution set.

For every hypothesis g the recognizer estimates the cost of reaching g
while explaining the observations (h_omega) and the cost of reaching g at
all (h); the goals whose difference is minimal are recognized.
"""

import json
import logging
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence

from django.conf import settings

from .counting import IMPROVED, h_goal, heuristic as heuristic_function
from .exceptions import AllInfeasible, InputError
from .linear import INF, IP, LP
from .observations import NoiseSpec, ObservationSequence
from .sas import PartialState, Task, format_partial_state, parse_partial_state, without_goal
from .search import cost_difference_solution_set

logger = logging.getLogger(__name__)

RESULT_SCHEMA_VERSION = 1


@dataclass
class GoalEstimate:
    h_omega: float
    h: float
    delta: float
    rows: int
    lp_time: float


@dataclass
class RecognitionResult:
    """
    Attributes:
        per_goal: estimates keyed by goal id (g1, g2, ...)
        delta_min: smallest finite difference
        solution: ids of the recognized goals
        total_time: seconds for the whole call
    """
    per_goal: Dict[str, GoalEstimate]
    delta_min: float
    solution: frozenset
    total_time: float
    heuristic: str = IMPROVED
    mode: str = LP
    epsilon: Fraction = Fraction(0)
    hypotheses: Dict[str, str] = field(default_factory=dict)

    @property
    def rows(self) -> float:
        """Average model rows over the hypotheses."""
        if not self.per_goal:
            return 0
        return sum(e.rows for e in self.per_goal.values()) / len(self.per_goal)

    @property
    def lp_time(self) -> float:
        return sum(e.lp_time for e in self.per_goal.values())

    @property
    def ordered_solution(self) -> List[str]:
        """Recognized goal ids in hypothesis order."""
        return [goal_id for goal_id in self.per_goal if goal_id in self.solution]


def goal_ids(count: int) -> List[str]:
    return [f'g{i}' for i in range(1, count + 1)]


def _json_number(value):
    if value == INF:
        return None
    if isinstance(value, Fraction):
        return float(value)
    return value


def recognize(task: Task, hyps: Sequence[PartialState], omega: ObservationSequence, eps=0,
              heuristic: str = IMPROVED, mode: str = LP, backend: Optional[str] = None,
              exact: bool = False, tolerance: Optional[float] = None) -> RecognitionResult:
    """
    Recognize the goals in ``hyps`` that best explain ``omega``.

    Raises:
        InputError: no hypotheses were given
        UnknownLabel: an observation names no operator of the task
        AllInfeasible: no hypothesis can explain the observations
    """
    if not hyps:
        raise InputError('at least one goal hypothesis is required')
    started = time.perf_counter()
    if task.goal is not None:
        task = without_goal(task)
    noise = NoiseSpec.coerce(eps)
    estimate = heuristic_function(heuristic)
    if tolerance is None:
        exact_values = exact or mode == IP
        tolerance = 0 if exact_values else getattr(settings, 'RECOGNITION_LP_TOLERANCE', 1e-6)
    s0 = task.initial_state

    per_goal = {}
    for goal_id, goal in zip(goal_ids(len(hyps)), hyps):
        with_obs = estimate(task, goal, s0, omega, noise, mode=mode, backend=backend, exact=exact)
        plain = h_goal(task, goal, s0, mode=mode, backend=backend, exact=exact)
        delta = with_obs.value - plain.value if INF not in (with_obs.value, plain.value) else INF
        per_goal[goal_id] = GoalEstimate(with_obs.value, plain.value, delta,
                                         with_obs.rows, with_obs.lp_time + plain.lp_time)

    delta_min, solution = cost_difference_solution_set(
        {goal_id: (e.h_omega, e.h) for goal_id, e in per_goal.items()}, tolerance)
    if not solution:
        raise AllInfeasible('every hypothesis is infeasible under the observations')
    result = RecognitionResult(
        per_goal, delta_min, solution, time.perf_counter() - started, heuristic, mode, noise.epsilon,
        {goal_id: format_partial_state(task, goal) for goal_id, goal in zip(goal_ids(len(hyps)), hyps)},
    )
    logger.info('recognized %s (delta_min=%s, %s, %s)', result.ordered_solution, delta_min, heuristic, mode)
    return result


def agreement_ratio(reference: Iterable, answer: Iterable) -> Fraction:
    """Intersection over union; 1 when both sets are empty."""
    reference, answer = set(reference), set(answer)
    union = reference | answer
    if not union:
        return Fraction(1)
    return Fraction(len(reference & answer), len(union))


def result_to_dict(result: RecognitionResult) -> dict:
    return {
        'version': RESULT_SCHEMA_VERSION,
        'heuristic': result.heuristic,
        'mode': result.mode,
        'epsilon': float(result.epsilon),
        'goals': [
            {
                'id': goal_id,
                'atoms': result.hypotheses.get(goal_id, ''),
                'h_omega': _json_number(estimate.h_omega),
                'h': _json_number(estimate.h),
                'delta': _json_number(estimate.delta),
                'rows': estimate.rows,
                'lp_time': estimate.lp_time,
            }
            for goal_id, estimate in result.per_goal.items()
        ],
        'delta_min': _json_number(result.delta_min),
        'solution': result.ordered_solution,
        'total_time': result.total_time,
    }


def result_to_json(result: RecognitionResult) -> str:
    return json.dumps(result_to_dict(result), indent=2)


# Hypothesis files: one goal per line, atoms "var=value" separated by commas

def parse_hypotheses(task: Task, text: str) -> List[PartialState]:
    hyps = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith(';'):
            continue
        hyps.append(parse_partial_state(task, line))
    return hyps


def read_hypotheses(task: Task, path) -> List[PartialState]:
    return parse_hypotheses(task, Path(path).read_text(encoding='utf-8'))


def write_hypotheses(task: Task, hyps: Iterable[PartialState], path):
    lines = [format_partial_state(task, goal) for goal in hyps]
    Path(path).write_text('\n'.join(lines) + '\n', encoding='utf-8')
