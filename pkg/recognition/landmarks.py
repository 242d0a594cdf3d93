"""
Disjunctive action landmarks from the delete relaxation.

A landmark is a set of operators of which at least one occurs in every plan
reaching a target. Extraction backchains one step over first achievers:
for each target atom not already true, the operators that can add it first
form a landmark, and atoms required by every such first achiever yield
landmarks of their own.
"""

import logging
from dataclasses import dataclass, field
from typing import FrozenSet, Iterable, Iterator, List, Optional, Set, Tuple

from .observations import ObservationSequence
from .sas import CompleteState, PartialState, Task

logger = logging.getLogger(__name__)

GOAL = 'goal'
OBSERVATION = 'observation'

Atom = Tuple[int, int]


@dataclass(frozen=True)
class Origin:
    """Where a landmark came from: the goal, or one observed label."""
    kind: str = GOAL
    label: Optional[str] = None
    occurrence: Optional[int] = None

    def __str__(self):
        if self.kind == GOAL:
            return 'goal'
        return f'observation {self.label}@{self.occurrence}'


GOAL_ORIGIN = Origin(GOAL)


@dataclass(frozen=True)
class Landmark:
    operators: FrozenSet[str]
    origin: Origin = GOAL_ORIGIN

    def __post_init__(self):
        object.__setattr__(self, 'operators', frozenset(self.operators))
        if not self.operators:
            raise ValueError('a landmark needs at least one operator')

    def __str__(self):
        return '{' + ','.join(sorted(self.operators)) + '} <- ' + str(self.origin)


@dataclass(frozen=True)
class LandmarkSet:
    """
    Landmarks plus the origins whose target is unreachable.

    Identical operator sets are dropped within one origin only.
    """
    landmarks: Tuple[Landmark, ...] = ()
    infeasible: Tuple[Origin, ...] = ()

    def __post_init__(self):
        unique = list(dict.fromkeys(self.landmarks))
        object.__setattr__(self, 'landmarks', tuple(unique))
        object.__setattr__(self, 'infeasible', tuple(dict.fromkeys(self.infeasible)))

    def __iter__(self) -> Iterator[Landmark]:
        return iter(self.landmarks)

    def __len__(self) -> int:
        return len(self.landmarks)

    @property
    def is_infeasible(self) -> bool:
        return bool(self.infeasible)

    def of_kind(self, kind: str) -> List[Landmark]:
        return [lm for lm in self.landmarks if lm.origin.kind == kind]

    def infeasible_of_kind(self, kind: str) -> List[Origin]:
        return [origin for origin in self.infeasible if origin.kind == kind]

    @classmethod
    def combine(cls, sets: Iterable['LandmarkSet']) -> 'LandmarkSet':
        landmarks, infeasible = [], []
        for lms in sets:
            landmarks.extend(lms.landmarks)
            infeasible.extend(lms.infeasible)
        return cls(tuple(landmarks), tuple(infeasible))


def relaxed_reachable(task: Task, s: CompleteState, excluded: FrozenSet[str] = frozenset(),
                      without: Optional[Atom] = None) -> Set[Atom]:
    """
    Atoms reachable from ``s`` in the delete relaxation.

    Operators in ``excluded`` are ignored. With ``without`` set, that atom is
    never added and operators requiring it are ignored.
    """
    reached = set(s.atoms())
    if without is not None:
        reached.discard(without)
    pending = [op for op in task.operators
               if op.label not in excluded and (without is None or without not in op.preconditions)]
    changed = True
    while changed:
        changed = False
        remaining = []
        for op in pending:
            if all(atom in reached for atom in op.preconditions):
                for atom in op.effects:
                    if atom != without and atom not in reached:
                        reached.add(atom)
                        changed = True
            else:
                remaining.append(op)
        pending = remaining
    return reached


def first_achievers(task: Task, s: CompleteState, atom: Atom) -> FrozenSet[str]:
    """Operators adding ``atom`` whose preconditions are reachable without it."""
    reachable = relaxed_reachable(task, s, without=atom)
    return frozenset(
        op.label for op in task.operators
        if atom in op.effects and all(pre in reachable for pre in op.preconditions)
    )


def _required_atoms(task: Task, achievers: FrozenSet[str]) -> Set[Atom]:
    """Atoms in the precondition of every operator in ``achievers``."""
    shared = None
    for label in sorted(achievers):
        atoms = set(task.operator(label).preconditions)
        shared = atoms if shared is None else shared & atoms
    return shared or set()


def extract_landmarks(task: Task, target: PartialState, s: CompleteState,
                      origin: Origin = GOAL_ORIGIN) -> LandmarkSet:
    """
    Landmarks for reaching ``target`` from ``s``.

    An unreachable target produces no landmarks; its origin is recorded in
    ``LandmarkSet.infeasible`` instead.
    """
    reachable = relaxed_reachable(task, s)
    landmarks = []
    for var, value in target:
        if s[var] == value:
            continue
        if (var, value) not in reachable:
            logger.debug('target atom %s unreachable from state', task.atom_name(var, value))
            return LandmarkSet((), (origin,))
        achievers = first_achievers(task, s, (var, value))
        landmarks.append(Landmark(achievers, origin))
        for required in sorted(_required_atoms(task, achievers)):
            if s[required[0]] != required[1]:
                landmarks.append(Landmark(first_achievers(task, s, required), origin))
    return LandmarkSet(tuple(landmarks))


def observation_landmarks(task: Task, omega: ObservationSequence, s: CompleteState) -> LandmarkSet:
    """Landmarks for the precondition of each distinct observed operator."""
    sets = []
    for label in omega.distinct_labels():
        op = task.operator(label)
        origin = Origin(OBSERVATION, label, omega.first_index(label))
        sets.append(extract_landmarks(task, op.preconditions, s, origin))
    return LandmarkSet.combine(sets)


def verify_landmark(task: Task, target: PartialState, s: CompleteState, lm: Landmark) -> bool:
    """True iff removing ``lm``'s operators makes ``target`` relaxed-unreachable from ``s``."""
    reachable = relaxed_reachable(task, s, excluded=lm.operators)
    return not all(atom in reachable for atom in target)


def dump(lms: LandmarkSet) -> str:
    lines = [str(lm) for lm in lms]
    lines += [f'{{}} <- {origin} (unreachable)' for origin in lms.infeasible]
    return '\n'.join(lines) + ('\n' if lines else '')
