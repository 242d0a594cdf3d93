"""
Exception hierarchy for the recognition engine.

``InputError`` subclasses describe bad user input (malformed files, unknown
labels) and map to exit code 2 in the management commands; ``ResourceLimit``
subclasses map to exit code 3.
"""


class RecognitionError(Exception):
    """Base class for every error raised by the recognition engine."""


class InputError(RecognitionError):
    """Malformed or inconsistent input."""


class SasSyntaxError(InputError):
    """A SAS (or JSON task) file does not follow the expected layout."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f'line {line}: {message}'
        super().__init__(message)
        self.line = line


class UnsupportedFeature(InputError):
    """Axioms, conditional effects, or non-unit costs in strict mode."""


class UnknownLabel(InputError):
    """An operator label does not resolve to an operator of the task."""

    def __init__(self, label):
        super().__init__(f'unknown operator label: {label!r}')
        self.label = label


class EmptyPlan(InputError):
    """Observations cannot be sampled from an empty plan."""


class DatasetFormatError(InputError):
    """A dataset directory does not follow the bundle layout."""


class GoalAlreadySet(RecognitionError):
    """``with_goal`` was called on a task that already has a goal."""


class NotApplicable(RecognitionError):
    """An operator was applied in a state that violates its preconditions."""


class NoNoiseCandidates(RecognitionError):
    """Every operator of the task occurs in the plan; nothing to inject."""


class ResourceLimit(RecognitionError):
    """A search or solver budget was exhausted. Never the same as infinity."""


class Unsolvable(RecognitionError):
    """The search space was exhausted without reaching the goal."""


class MissingObservationColumn(RecognitionError):
    """An observation landmark refers to a label with no Y^Omega column."""


class AllInfeasible(RecognitionError):
    """Every hypothesis has an infinite observation-complying estimate."""


class SolverError(RecognitionError):
    """Base class for LP/IP solver failures."""


class NumericalFailure(SolverError):
    """The solution breached the feasibility tolerance after restarts."""


class IterationLimit(SolverError, ResourceLimit):
    """Pivot or branch-and-bound node budget exhausted."""
