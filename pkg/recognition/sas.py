"""
SAS+ planning tasks: representation, parsing, serialization and execution.

The primary input format is version 3 of the Fast Downward translator
output; a small JSON task format is accepted for hand-written fixtures
(see ``docs/formats.md``). Every type here is immutable once built and safe
to share between threads.
"""

import json
import logging
import re
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, Iterator, List, NamedTuple, Optional, Tuple

from django.conf import settings

from .exceptions import (
    GoalAlreadySet, NotApplicable, SasSyntaxError, UnknownLabel, UnsupportedFeature,
)

logger = logging.getLogger(__name__)

SAS_FILE_VERSION = 3

_WHITESPACE = re.compile(r'\s+')


def normalize_label(text: str) -> str:
    """Normalize an operator name so SAS names and observation lines join.

    Lowercases, drops one pair of enclosing parentheses and collapses runs
    of whitespace to a single space.
    """
    label = text.strip()
    if label.startswith('(') and label.endswith(')'):
        label = label[1:-1]
    return _WHITESPACE.sub(' ', label.strip()).lower()


@dataclass(frozen=True)
class Variable:
    """A finite-domain state variable."""
    name: str
    domain_size: int
    value_names: Tuple[str, ...]

    def __post_init__(self):
        if self.domain_size < 1 or self.domain_size != len(self.value_names):
            raise SasSyntaxError(
                f'variable {self.name!r}: domain size {self.domain_size} '
                f'does not match {len(self.value_names)} value names')


@dataclass(frozen=True)
class PartialState:
    """A set of atoms (variable index, value index), each variable at most once."""
    assignments: Tuple[Tuple[int, int], ...] = ()

    def __post_init__(self):
        ordered = tuple(sorted(self.assignments))
        variables = [var for var, _ in ordered]
        if len(variables) != len(set(variables)):
            raise SasSyntaxError(f'partial state mentions a variable twice: {ordered}')
        object.__setattr__(self, 'assignments', ordered)

    @classmethod
    def from_dict(cls, mapping: Dict[int, int]) -> 'PartialState':
        return cls(tuple(mapping.items()))

    def as_dict(self) -> Dict[int, int]:
        return dict(self.assignments)

    def get(self, var: int, default=None):
        for v, value in self.assignments:
            if v == var:
                return value
        return default

    def variables(self) -> frozenset:
        return frozenset(var for var, _ in self.assignments)

    def holds_in(self, state: 'CompleteState') -> bool:
        values = state.values
        return all(values[var] == value for var, value in self.assignments)

    def __iter__(self) -> Iterator[Tuple[int, int]]:
        return iter(self.assignments)

    def __len__(self) -> int:
        return len(self.assignments)

    def __contains__(self, atom) -> bool:
        return tuple(atom) in self.assignments


@dataclass(frozen=True)
class CompleteState:
    """One value index per task variable."""
    values: Tuple[int, ...]

    def __getitem__(self, var: int) -> int:
        return self.values[var]

    def __len__(self) -> int:
        return len(self.values)

    def atoms(self) -> Iterator[Tuple[int, int]]:
        return enumerate(self.values)


@dataclass(frozen=True)
class Operator:
    """A SAS+ operator; preconditions include the prevail conditions."""
    label: str
    preconditions: PartialState
    effects: PartialState
    cost: int = 1

    def __post_init__(self):
        if not len(self.effects):
            raise SasSyntaxError(f'operator {self.label!r} has no effects')


@dataclass(frozen=True)
class Plan:
    """A sequence of operator labels."""
    steps: Tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, 'steps', tuple(self.steps))

    def __len__(self) -> int:
        return len(self.steps)

    def __iter__(self) -> Iterator[str]:
        return iter(self.steps)

    def __getitem__(self, index):
        return self.steps[index]

    def occurrences(self) -> Counter:
        return Counter(self.steps)


@dataclass(frozen=True)
class Task:
    """
    A SAS+ planning task.

    Attributes:
        variables: finite-domain variables, addressed by index
        operators: operators in file order; this order is the LP column order
        initial_state: complete initial state
        goal: partial goal state, or None for a goal-less recognition task
    """
    variables: Tuple[Variable, ...]
    operators: Tuple[Operator, ...]
    initial_state: CompleteState
    goal: Optional[PartialState] = None
    _by_label: Dict[str, Operator] = field(default=None, init=False, repr=False, compare=False)
    _ordered: Tuple[Operator, ...] = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, 'variables', tuple(self.variables))
        object.__setattr__(self, 'operators', tuple(self.operators))
        by_label = {}
        for op in self.operators:
            if op.label in by_label:
                raise SasSyntaxError(f'duplicate operator label {op.label!r}')
            by_label[op.label] = op
        object.__setattr__(self, '_by_label', by_label)
        object.__setattr__(self, '_ordered', tuple(sorted(self.operators, key=lambda o: o.label)))
        self.validate()

    def validate(self):
        """Check that every atom respects its variable's domain."""
        if len(self.initial_state) != len(self.variables):
            raise SasSyntaxError(
                f'initial state has {len(self.initial_state)} values '
                f'for {len(self.variables)} variables')
        for var, value in self.initial_state.atoms():
            self._check_atom(var, value, 'initial state')
        for op in self.operators:
            for var, value in op.preconditions:
                self._check_atom(var, value, op.label)
            for var, value in op.effects:
                self._check_atom(var, value, op.label)
        if self.goal is not None:
            for var, value in self.goal:
                self._check_atom(var, value, 'goal')

    def _check_atom(self, var, value, where):
        if not 0 <= var < len(self.variables):
            raise SasSyntaxError(f'{where}: variable index {var} out of range')
        if not 0 <= value < self.variables[var].domain_size:
            raise SasSyntaxError(
                f'{where}: value {value} outside dom({self.variables[var].name})')

    @property
    def labels(self) -> List[str]:
        return [op.label for op in self.operators]

    @property
    def ordered_operators(self) -> Tuple[Operator, ...]:
        """Operators sorted by label; the search tie-breaking order."""
        return self._ordered

    def has_label(self, label: str) -> bool:
        return label in self._by_label

    def operator(self, label: str) -> Operator:
        try:
            return self._by_label[label]
        except KeyError:
            raise UnknownLabel(label) from None

    def index_of(self, label: str) -> int:
        return self.operators.index(self.operator(label))

    def cost(self, label: str) -> int:
        return self.operator(label).cost

    def atom_name(self, var: int, value: int) -> str:
        variable = self.variables[var]
        return f'{variable.name}={variable.value_names[value]}'

    def successors(self, state: CompleteState) -> Iterator[Tuple[Operator, CompleteState]]:
        """Applicable operators and their successor states, by label."""
        for op in self._ordered:
            if op.preconditions.holds_in(state):
                yield op, apply(state, op)


class PlanCheck(NamedTuple):
    valid: bool
    cost: Optional[int]


# Execution semantics

def applicable(state: CompleteState, op: Operator) -> bool:
    """True iff every precondition atom of ``op`` holds in ``state``."""
    return op.preconditions.holds_in(state)


def apply(state: CompleteState, op: Operator) -> CompleteState:
    """Execute ``op`` in ``state``; raises NotApplicable if it is not applicable."""
    if not op.preconditions.holds_in(state):
        raise NotApplicable(f'{op.label!r} is not applicable')
    values = list(state.values)
    for var, value in op.effects:
        values[var] = value
    return CompleteState(tuple(values))


def validate_plan(task: Task, goal: Optional[PartialState], plan: Plan) -> PlanCheck:
    """Simulate ``plan`` from the initial state and test the goal.

    Unknown labels raise UnknownLabel; an inapplicable step makes the plan
    invalid rather than raising.
    """
    operators = [task.operator(label) for label in plan]
    state = task.initial_state
    for op in operators:
        if not applicable(state, op):
            return PlanCheck(False, None)
        state = apply(state, op)
    if goal is not None and not goal.holds_in(state):
        return PlanCheck(False, None)
    return PlanCheck(True, sum(op.cost for op in operators))


def with_goal(task: Task, goal: PartialState) -> Task:
    """Return ``task`` with its (absent) goal set to ``goal``."""
    if task.goal is not None:
        raise GoalAlreadySet('task already has a goal condition')
    return Task(task.variables, task.operators, task.initial_state, goal)


def without_goal(task: Task) -> Task:
    return Task(task.variables, task.operators, task.initial_state, None)


# Atom text: "var_name=value_name, var_name=value_name"

def _split_atoms(text: str) -> List[str]:
    """Split on commas that are not nested inside parentheses."""
    parts, depth, current = [], 0, []
    for char in text:
        if char == '(':
            depth += 1
        elif char == ')':
            depth -= 1
        if char == ',' and depth == 0:
            parts.append(''.join(current))
            current = []
        else:
            current.append(char)
    parts.append(''.join(current))
    return [p.strip() for p in parts if p.strip()]


def parse_partial_state(task: Task, text: str) -> PartialState:
    """Parse grounded atoms ``var_name=value_name`` separated by commas."""
    names = {variable.name: index for index, variable in enumerate(task.variables)}
    atoms = {}
    for chunk in _split_atoms(text):
        name, sep, value_name = chunk.partition('=')
        name, value_name = name.strip(), value_name.strip()
        if not sep or name not in names:
            raise SasSyntaxError(f'unknown atom {chunk!r}')
        var = names[name]
        values = task.variables[var].value_names
        if value_name in values:
            value = values.index(value_name)
        elif value_name.isdigit() and int(value_name) < len(values):
            value = int(value_name)
        else:
            raise SasSyntaxError(f'{value_name!r} is not a value of {name}')
        if var in atoms and atoms[var] != value:
            raise SasSyntaxError(f'conflicting values for {name} in {text!r}')
        atoms[var] = value
    return PartialState.from_dict(atoms)


def format_partial_state(task: Task, partial: PartialState) -> str:
    return ', '.join(task.atom_name(var, value) for var, value in partial)


# SAS v3 reader

class _SasReader:
    """Line cursor over a SAS file with section helpers."""

    def __init__(self, text: str):
        self.lines = [line.strip() for line in text.splitlines()]
        self.position = 0

    def at_end(self) -> bool:
        while self.position < len(self.lines) and not self.lines[self.position]:
            self.position += 1
        return self.position >= len(self.lines)

    def peek(self) -> str:
        return '' if self.at_end() else self.lines[self.position]

    def eat(self) -> str:
        if self.at_end():
            raise SasSyntaxError('unexpected end of file', self.position + 1)
        line = self.lines[self.position]
        self.position += 1
        return line

    def expect(self, keyword: str):
        line = self.eat()
        if line != keyword:
            raise SasSyntaxError(f'expected {keyword!r}, found {line!r}', self.position)

    def eat_int(self) -> int:
        line = self.eat()
        try:
            return int(line)
        except ValueError:
            raise SasSyntaxError(f'expected an integer, found {line!r}', self.position) from None

    def eat_ints(self, count: int) -> List[int]:
        line = self.eat()
        try:
            numbers = [int(token) for token in line.split()]
        except ValueError:
            raise SasSyntaxError(f'expected integers, found {line!r}', self.position) from None
        if len(numbers) != count:
            raise SasSyntaxError(f'expected {count} integers, found {line!r}', self.position)
        return numbers


def parse_sas(text: str, strict: Optional[bool] = None) -> Task:
    """
    Parse a SAS file (translator output, version 3) into a Task.

    Args:
        text: file contents
        strict: reject non-unit operator costs; defaults to RECOGNITION_SAS_STRICT

    Raises:
        SasSyntaxError: malformed section
        UnsupportedFeature: axioms, derived variables, conditional effects,
            or non-unit costs in strict mode
    """
    if strict is None:
        strict = getattr(settings, 'RECOGNITION_SAS_STRICT', True)
    reader = _SasReader(text)

    reader.expect('begin_version')
    version = reader.eat_int()
    if version != SAS_FILE_VERSION:
        raise UnsupportedFeature(f'SAS version {version} (only {SAS_FILE_VERSION} is supported)')
    reader.expect('end_version')
    reader.expect('begin_metric')
    use_costs = reader.eat_int() == 1
    reader.expect('end_metric')

    variables = []
    for _ in range(reader.eat_int()):
        reader.expect('begin_variable')
        name = reader.eat()
        axiom_layer = reader.eat_int()
        if axiom_layer != -1:
            raise UnsupportedFeature(f'derived variable {name!r} (axiom layer {axiom_layer})')
        size = reader.eat_int()
        value_names = tuple(reader.eat() for _ in range(size))
        reader.expect('end_variable')
        variables.append(Variable(name, size, value_names))

    # Mutex groups carry no semantics we need.
    for _ in range(reader.eat_int()):
        reader.expect('begin_mutex_group')
        for _ in range(reader.eat_int()):
            reader.eat()
        reader.expect('end_mutex_group')

    reader.expect('begin_state')
    initial = CompleteState(tuple(reader.eat_int() for _ in variables))
    reader.expect('end_state')

    goal = None
    if reader.peek() == 'begin_goal':
        reader.eat()
        goal = PartialState(tuple(tuple(reader.eat_ints(2)) for _ in range(reader.eat_int())))
        reader.expect('end_goal')

    operators = []
    for _ in range(reader.eat_int()):
        operators.append(_parse_operator(reader, use_costs, strict))

    if not reader.at_end():
        axioms = reader.eat_int()
        if axioms:
            raise UnsupportedFeature(f'{axioms} axiom rule(s)')

    task = Task(tuple(variables), tuple(operators), initial, goal)
    logger.debug('parsed SAS task: %d variables, %d operators', len(variables), len(operators))
    return task


def _parse_operator(reader: _SasReader, use_costs: bool, strict: bool) -> Operator:
    reader.expect('begin_operator')
    label = normalize_label(reader.eat())
    pre = {}
    for _ in range(reader.eat_int()):
        var, value = reader.eat_ints(2)
        pre[var] = value
    eff = {}
    for _ in range(reader.eat_int()):
        line = reader.eat()
        tokens = line.split()
        if not tokens or not tokens[0].lstrip('-').isdigit():
            raise SasSyntaxError(f'malformed effect {line!r}', reader.position)
        if int(tokens[0]) != 0:
            raise UnsupportedFeature(f'conditional effect in operator {label!r}')
        if len(tokens) != 4:
            raise SasSyntaxError(f'malformed effect {line!r}', reader.position)
        var, before, after = (int(t) for t in tokens[1:])
        if var in eff:
            raise SasSyntaxError(f'operator {label!r} sets variable {var} twice', reader.position)
        if before != -1:
            if var in pre and pre[var] != before:
                raise SasSyntaxError(
                    f'operator {label!r} mentions variable {var} twice in its precondition',
                    reader.position)
            pre[var] = before
        eff[var] = after
    cost = reader.eat_int()
    reader.expect('end_operator')
    if not use_costs:
        cost = 1
    if strict and cost != 1:
        raise UnsupportedFeature(f'operator {label!r} has cost {cost}; only unit costs are supported')
    return Operator(label, PartialState.from_dict(pre), PartialState.from_dict(eff), cost)


def serialize_sas(task: Task) -> str:
    """Write ``task`` in SAS v3 (no mutex groups, no axioms)."""
    lines = ['begin_version', str(SAS_FILE_VERSION), 'end_version', 'begin_metric']
    lines.append('1' if any(op.cost != 1 for op in task.operators) else '0')
    lines.append('end_metric')
    lines.append(str(len(task.variables)))
    for variable in task.variables:
        lines += ['begin_variable', variable.name, '-1', str(variable.domain_size)]
        lines += list(variable.value_names)
        lines.append('end_variable')
    lines.append('0')
    lines.append('begin_state')
    lines += [str(value) for value in task.initial_state.values]
    lines.append('end_state')
    if task.goal is not None:
        lines += ['begin_goal', str(len(task.goal))]
        lines += [f'{var} {value}' for var, value in task.goal]
        lines.append('end_goal')
    lines.append(str(len(task.operators)))
    for op in task.operators:
        effect_vars = op.effects.variables()
        prevail = [(var, value) for var, value in op.preconditions if var not in effect_vars]
        lines += ['begin_operator', op.label, str(len(prevail))]
        lines += [f'{var} {value}' for var, value in prevail]
        lines.append(str(len(op.effects)))
        for var, value in op.effects:
            lines.append(f'0 {var} {op.preconditions.get(var, -1)} {value}')
        lines += [str(op.cost), 'end_operator']
    lines.append('0')
    return '\n'.join(lines) + '\n'


# JSON task format (hand-written fixtures)

def parse_json_task(text: str, strict: Optional[bool] = None) -> Task:
    """Parse the JSON task schema described in docs/formats.md."""
    if strict is None:
        strict = getattr(settings, 'RECOGNITION_SAS_STRICT', True)
    try:
        data = json.loads(text)
        variables = tuple(
            Variable(v['name'], len(v['values']), tuple(v['values'])) for v in data['variables'])
    except (ValueError, KeyError, TypeError) as exc:
        raise SasSyntaxError(f'invalid JSON task: {exc}') from None

    def atoms(mapping, where):
        result = {}
        for name, value_name in (mapping or {}).items():
            matches = [i for i, v in enumerate(variables) if v.name == name]
            if not matches or value_name not in variables[matches[0]].value_names:
                raise SasSyntaxError(f'{where}: unknown atom {name}={value_name}')
            result[matches[0]] = variables[matches[0]].value_names.index(value_name)
        return result

    init = atoms(data.get('init'), 'init')
    if len(init) != len(variables):
        raise SasSyntaxError('init must assign every variable')
    operators = []
    for entry in data.get('operators', []):
        label = normalize_label(entry['name'])
        cost = int(entry.get('cost', 1))
        if strict and cost != 1:
            raise UnsupportedFeature(f'operator {label!r} has cost {cost}; only unit costs are supported')
        operators.append(Operator(
            label,
            PartialState.from_dict(atoms(entry.get('pre'), label)),
            PartialState.from_dict(atoms(entry.get('eff'), label)),
            cost,
        ))
    goal = None
    if data.get('goal') is not None:
        goal = PartialState.from_dict(atoms(data['goal'], 'goal'))
    initial = CompleteState(tuple(init[i] for i in range(len(variables))))
    return Task(variables, tuple(operators), initial, goal)


def task_to_json(task: Task) -> str:
    def named(partial):
        return {task.variables[var].name: task.variables[var].value_names[value] for var, value in partial}

    data = {
        'variables': [{'name': v.name, 'values': list(v.value_names)} for v in task.variables],
        'init': named(task.initial_state.atoms()),
        'operators': [
            {'name': op.label, 'pre': named(op.preconditions), 'eff': named(op.effects), 'cost': op.cost}
            for op in task.operators
        ],
    }
    if task.goal is not None:
        data['goal'] = named(task.goal)
    return json.dumps(data, indent=2)


def load_task(path, strict: Optional[bool] = None) -> Task:
    """Read a task file; ``.json`` files use the JSON schema, anything else SAS."""
    path = Path(path)
    text = path.read_text(encoding='utf-8')
    if path.suffix.lower() == '.json':
        return parse_json_task(text, strict)
    return parse_sas(text, strict)


def plan_from_labels(task: Task, labels: Iterable[str]) -> Plan:
    """Build a Plan from raw labels, normalizing and resolving each one."""
    steps = tuple(normalize_label(label) for label in labels)
    for label in steps:
        task.operator(label)
    return Plan(steps)
