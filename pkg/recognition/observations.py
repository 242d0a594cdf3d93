"""
Observation sequences: compliance, sampling and sensor noise.

Randomness is always supplied by the caller as a ``random.Random`` so that
dataset generation can be replayed (and parallelized) by seed.
"""

import logging
import math
import random
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple

from django.conf import settings

from .exceptions import EmptyPlan, NoNoiseCandidates
from .sas import Plan, Task, normalize_label

logger = logging.getLogger(__name__)


def as_fraction(value) -> Fraction:
    """Exact rational from an int, float, str or Fraction (0.2 -> 1/5)."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    return Fraction(str(value))


@dataclass(frozen=True)
class ObservationSequence:
    """An ordered sequence of observed operator labels."""
    labels: Tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, 'labels', tuple(self.labels))

    @property
    def occurrences(self) -> Counter:
        return Counter(self.labels)

    def occurrence(self, label: str) -> int:
        return self.labels.count(label)

    def distinct_labels(self) -> List[str]:
        """Distinct labels in order of first occurrence."""
        return list(dict.fromkeys(self.labels))

    def first_index(self, label: str) -> int:
        return self.labels.index(label)

    def unknown_labels(self, task: Task) -> List[str]:
        return [label for label in self.distinct_labels() if not task.has_label(label)]

    def __len__(self) -> int:
        return len(self.labels)

    def __iter__(self) -> Iterator[str]:
        return iter(self.labels)

    def __getitem__(self, index):
        return self.labels[index]


@dataclass(frozen=True)
class NoiseSpec:
    """Unreliability rating: the fraction of observations that may be noise."""
    epsilon: Fraction = Fraction(0)

    def __post_init__(self):
        epsilon = as_fraction(self.epsilon)
        if not 0 <= epsilon <= 1:
            raise ValueError(f'epsilon must lie in [0, 1], got {epsilon}')
        object.__setattr__(self, 'epsilon', epsilon)

    @classmethod
    def coerce(cls, value) -> 'NoiseSpec':
        if isinstance(value, cls):
            return value
        return cls(as_fraction(value or 0))

    def __float__(self) -> float:
        return float(self.epsilon)


def complies(plan: Plan, omega: ObservationSequence) -> bool:
    """True iff ``omega`` embeds into ``plan`` by a strictly increasing index map.

    Greedy left-to-right matching decides this exactly.
    """
    position = 0
    observed = omega.labels
    for label in plan:
        if position == len(observed):
            break
        if label == observed[position]:
            position += 1
    return position == len(observed)


def observation_length(plan_length: int, ratio) -> int:
    """round-half-up(ratio * plan_length)."""
    return math.floor(as_fraction(ratio) * plan_length + Fraction(1, 2))


def sample_observations(plan: Plan, ratio, rng: random.Random) -> ObservationSequence:
    """Keep a random order-preserving subsequence of ``plan``."""
    ratio = as_fraction(ratio)
    if not 0 < ratio <= 1:
        raise ValueError(f'observability ratio must lie in (0, 1], got {ratio}')
    if not len(plan):
        raise EmptyPlan('cannot sample observations from an empty plan')
    if ratio == 1:
        return ObservationSequence(plan.steps)
    keep = observation_length(len(plan), ratio)
    indices = sorted(rng.sample(range(len(plan)), keep))
    return ObservationSequence(tuple(plan[i] for i in indices))


def noise_count(omega: ObservationSequence, rate=None) -> int:
    """ceil(rate * |omega|); the rate defaults to RECOGNITION_NOISE_RATE."""
    if rate is None:
        rate = getattr(settings, 'RECOGNITION_NOISE_RATE', 0.2)
    return math.ceil(as_fraction(rate) * len(omega))


def inject_noise(omega: ObservationSequence, task: Task, plan: Plan, rng: random.Random,
                 count: Optional[int] = None, rate=None) -> ObservationSequence:
    """
    Insert spurious observations into ``omega``.

    Each inserted label is drawn uniformly from the operators that do not
    occur in ``plan`` and placed at a uniformly random position (both ends
    included). ``count`` overrides the default ceil(rate * |omega|).
    """
    candidates = sorted(set(task.labels) - set(plan))
    if not candidates:
        raise NoNoiseCandidates('every operator of the task occurs in the plan')
    if count is None:
        count = noise_count(omega, rate)
    labels = list(omega.labels)
    for _ in range(count):
        label = rng.choice(candidates)
        labels.insert(rng.randint(0, len(labels)), label)
    return ObservationSequence(tuple(labels))


def denoise(omega: ObservationSequence, plan: Plan) -> ObservationSequence:
    """Drop observations whose label never occurs in ``plan``."""
    used = set(plan)
    return ObservationSequence(tuple(label for label in omega if label in used))


def max_ignorable(omega: ObservationSequence, eps) -> int:
    """floor(|omega| * epsilon): observations the LP may leave unexplained."""
    return math.floor(len(omega) * NoiseSpec.coerce(eps).epsilon)


# Observation files: one label per line, ';' starts a comment line

def parse_observations(text: str) -> ObservationSequence:
    labels = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith(';'):
            continue
        labels.append(normalize_label(line))
    return ObservationSequence(tuple(labels))


def read_observations(path) -> ObservationSequence:
    return parse_observations(Path(path).read_text(encoding='utf-8'))


def format_observations(labels: Iterable[str], comments: Sequence[str] = ()) -> str:
    lines = [f'; {comment}' for comment in comments]
    lines += [f'({label})' for label in labels]
    return '\n'.join(lines) + '\n'


def write_observations(labels: Iterable[str], path, comments: Sequence[str] = ()):
    """Write an observation (or plan) file; labels are wrapped in parentheses."""
    Path(path).write_text(format_observations(labels, comments), encoding='utf-8')
