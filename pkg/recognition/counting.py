"""
Operator-counting heuristics for goal recognition.

One column ``Y[o]`` per operator counts how often ``o`` is used; one column
``YO[o]`` per observed operator counts how many observations of ``o`` the
pseudo-plan explains. Constraint sources add rows to this model; the
heuristic value is its LP (or IP) optimum.
"""

import logging
import math
import time
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional, Sequence

from .exceptions import MissingObservationColumn, UnknownLabel
from .landmarks import GOAL, OBSERVATION, LandmarkSet, extract_landmarks, observation_landmarks
from .linear import INF, LP, LinearModel, solve
from .observations import NoiseSpec, ObservationSequence, max_ignorable
from .sas import CompleteState, PartialState, Plan, Task

logger = logging.getLogger(__name__)

BASE = 'base'
IMPROVED = 'improved'
HEURISTICS = (BASE, IMPROVED)


def count_column(label: str) -> str:
    return f'Y[{label}]'


def observation_column(label: str) -> str:
    return f'YO[{label}]'


@dataclass
class HeuristicReport:
    """Outcome of one heuristic evaluation.

    Attributes:
        value: LP/IP objective, or infinity when the model is infeasible
        rows: number of model rows at solve time
        lp_time: seconds spent in the solver
        mode: 'lp' or 'ip'
    """
    value: float
    rows: int
    lp_time: float
    mode: str = LP

    @property
    def is_finite(self) -> bool:
        return self.value != INF


# Model builders

def operator_model(task: Task) -> LinearModel:
    """Columns Y[o] >= 0 in operator order; objective sum cost(o) * Y[o]."""
    model = LinearModel()
    for op in task.operators:
        model.add_column(count_column(op.label), objective=op.cost)
    return model


def add_landmark_constraints(m: LinearModel, lms: LandmarkSet) -> LinearModel:
    """Add ``sum Y[o] >= 1`` for every goal landmark; flag an unreachable goal."""
    model = m.copy()
    if lms.infeasible_of_kind(GOAL):
        model.infeasible = True
    for k, lm in enumerate(lms.of_kind(GOAL)):
        model.add_row(f'lm:{k}', {count_column(label): 1 for label in sorted(lm.operators)}, lower=1)
    return model


def build_base_model(task: Task, g: PartialState, s: CompleteState, lms: LandmarkSet) -> LinearModel:
    return add_landmark_constraints(operator_model(task), lms)


def add_observation_constraints(m: LinearModel, omega: ObservationSequence, eps) -> LinearModel:
    """
    Add the observation-counting rows.

    Per observed operator o: ``YO[o] <= occ(o)`` and ``YO[o] <= Y[o]``;
    overall: ``sum YO >= |omega| - floor(|omega| * eps)``.
    """
    model = m.copy()
    occurrences = omega.occurrences
    labels = omega.distinct_labels()
    for label in labels:
        if not model.has_column(count_column(label)):
            raise UnknownLabel(label)
    labels.sort(key=lambda label: model.column_index(count_column(label)))
    for label in labels:
        model.add_column(observation_column(label))
    for label in labels:
        model.add_row(f'obs-cap[{label}]', {observation_column(label): 1}, upper=occurrences[label])
        model.add_row(f'obs-count[{label}]',
                      {observation_column(label): 1, count_column(label): -1}, upper=0)
    required = len(omega) - max_ignorable(omega, eps)
    model.add_row('obs-total', {observation_column(label): 1 for label in labels}, lower=required)
    return model


def add_observation_landmark_constraints(m: LinearModel, obs_lms: LandmarkSet,
                                         omega: ObservationSequence) -> LinearModel:
    """
    Tie observation landmarks to the observation counts.

    A landmark L of observed operator o adds
    ``sum_{l in L} Y[l] - YO[o] / occ(o) >= 0``. An observation whose
    precondition is unreachable gets ``YO[o] <= 0``.
    """
    model = m.copy()
    occurrences = omega.occurrences
    for k, lm in enumerate(obs_lms.of_kind(OBSERVATION)):
        label = lm.origin.label
        column = observation_column(label)
        if not model.has_column(column) or not occurrences[label]:
            raise MissingObservationColumn(f'no observation column for {label!r}')
        coefficients = {count_column(op): Fraction(1) for op in sorted(lm.operators)}
        coefficients[column] = -Fraction(1, occurrences[label])
        model.add_row(f'obs-lm[{label}]:{k}', coefficients, lower=0)
    for origin in obs_lms.infeasible_of_kind(OBSERVATION):
        column = observation_column(origin.label)
        if not model.has_column(column):
            raise MissingObservationColumn(f'no observation column for {origin.label!r}')
        model.add_row(f'obs-unreachable[{origin.label}]', {column: 1}, upper=0)
    return model


# Constraint sources

@dataclass(frozen=True)
class HeuristicContext:
    task: Task
    goal: PartialState
    state: CompleteState
    omega: ObservationSequence = ObservationSequence()
    eps: NoiseSpec = NoiseSpec()


class ConstraintSource:
    """Adds one family of operator-counting rows to a model."""
    name = 'abstract'

    def apply(self, model: LinearModel, context: HeuristicContext) -> LinearModel:
        raise NotImplementedError


class GoalLandmarkSource(ConstraintSource):
    name = 'goal-landmarks'

    def apply(self, model, context):
        lms = extract_landmarks(context.task, context.goal, context.state)
        return add_landmark_constraints(model, lms)


class ObservationCountingSource(ConstraintSource):
    name = 'observation-counting'

    def apply(self, model, context):
        return add_observation_constraints(model, context.omega, context.eps)


class ObservationLandmarkSource(ConstraintSource):
    name = 'observation-landmarks'

    def apply(self, model, context):
        lms = observation_landmarks(context.task, context.omega, context.state)
        return add_observation_landmark_constraints(model, lms, context.omega)


UNRESTRICTED_SOURCES = (GoalLandmarkSource(),)
BASE_SOURCES = (GoalLandmarkSource(), ObservationCountingSource())
IMPROVED_SOURCES = BASE_SOURCES + (ObservationLandmarkSource(),)

SOURCES = {BASE: BASE_SOURCES, IMPROVED: IMPROVED_SOURCES}


def build_heuristic_model(sources: Sequence[ConstraintSource], task: Task, goal: Optional[PartialState],
                          state: CompleteState, omega: Optional[ObservationSequence] = None,
                          eps=0) -> LinearModel:
    """Compose ``sources`` over the bare operator-count model."""
    context = HeuristicContext(
        task,
        goal if goal is not None else PartialState(),
        state,
        omega if omega is not None else ObservationSequence(),
        NoiseSpec.coerce(eps),
    )
    model = operator_model(task)
    for source in sources:
        model = source.apply(model, context)
    return model


def evaluate(model: LinearModel, mode: str = LP, backend: Optional[str] = None,
             exact: bool = False) -> HeuristicReport:
    started = time.perf_counter()
    outcome = solve(model, mode, backend=backend, exact=exact)
    return HeuristicReport(outcome.value, model.row_count, time.perf_counter() - started, mode)


def h_base(task: Task, g: PartialState, s: CompleteState, omega: ObservationSequence, eps,
           mode: str = LP, backend: Optional[str] = None, exact: bool = False) -> HeuristicReport:
    """Goal landmarks plus observation counting."""
    model = build_heuristic_model(BASE_SOURCES, task, g, s, omega, eps)
    return evaluate(model, mode, backend, exact)


def h_improved(task: Task, g: PartialState, s: CompleteState, omega: ObservationSequence, eps,
               mode: str = LP, backend: Optional[str] = None, exact: bool = False) -> HeuristicReport:
    """h_base plus the observation landmark rows."""
    model = build_heuristic_model(IMPROVED_SOURCES, task, g, s, omega, eps)
    return evaluate(model, mode, backend, exact)


def h_goal(task: Task, g: PartialState, s: CompleteState, mode: str = LP,
           backend: Optional[str] = None, exact: bool = False) -> HeuristicReport:
    """The goal landmark LP without observations."""
    model = build_heuristic_model(UNRESTRICTED_SOURCES, task, g, s)
    return evaluate(model, mode, backend, exact)


def heuristic(name: str):
    if name == BASE:
        return h_base
    if name == IMPROVED:
        return h_improved
    raise ValueError(f'unknown heuristic {name!r}; expected one of {", ".join(HEURISTICS)}')


def admissible_estimate(task: Task, g: PartialState, s: CompleteState, tolerance: float = 1e-6) -> float:
    """ceil of the goal landmark LP; integral lower bound under integer costs."""
    value = h_goal(task, g, s).value
    if value == INF:
        return INF
    return max(0, math.ceil(value - tolerance))


def plan_assignment(model: LinearModel, plan: Plan, omega: ObservationSequence) -> Dict[str, int]:
    """
    The count assignment induced by ``plan``.

    ``Y[o]`` is the number of occurrences of ``o`` in the plan; ``YO[o]`` is
    the number of observations of ``o`` the plan can explain, i.e.
    min(occ_omega(o), occ_plan(o)).
    """
    used = Counter(plan.steps)
    observed = omega.occurrences
    assignment = {}
    for name in model.column_names:
        if name.startswith('Y['):
            assignment[name] = used[name[2:-1]]
        elif name.startswith('YO['):
            label = name[3:-1]
            assignment[name] = min(observed[label], used[label])
    return assignment
