"""
Builders for the benchmark domains: grid navigation (open rooms and
corridor crosses), blocks world, switch boards and seeded random SAS
tasks. All tasks are built without a goal; goals are supplied as
hypotheses.
"""

import random
from typing import Dict, List, Optional, Sequence, Tuple

from .sas import CompleteState, Operator, PartialState, Task, Variable

TABLE = 'table'
HELD = 'held'


def cell(x: int, y: int, width: int) -> str:
    return f'c{y * width + x}'


def grid_task(width: int = 3, height: int = 3, start: Tuple[int, int] = (0, 0),
              blocked: Sequence[Tuple[int, int]] = ()) -> Task:
    """One ``pos`` variable over the open cells; unit-cost 4-neighbour moves."""
    blocked = set(blocked)
    cells = [(x, y) for y in range(height) for x in range(width) if (x, y) not in blocked]
    names = [cell(x, y, width) for x, y in cells]
    index = {name: i for i, name in enumerate(names)}
    operators = []
    for x, y in cells:
        for dx, dy in ((1, 0), (-1, 0), (0, 1), (0, -1)):
            target = (x + dx, y + dy)
            if target not in cells:
                continue
            source, dest = cell(x, y, width), cell(*target, width)
            operators.append(Operator(
                f'move {source} {dest}',
                PartialState(((0, index[source]),)),
                PartialState(((0, index[dest]),)),
            ))
    operators.sort(key=lambda op: op.label)
    variables = (Variable('pos', len(names), tuple(names)),)
    initial = CompleteState((index[cell(*start, width)],))
    return Task(variables, tuple(operators), initial)


def grid_hypotheses(width: int, height: int) -> List[str]:
    """The far corners and edge midpoints as ``pos=cN`` hypothesis lines."""
    spots = [(width - 1, height - 1), (width - 1, 0), (0, height - 1), (width // 2, height - 1)]
    return [f'pos={cell(x, y, width)}' for x, y in dict.fromkeys(spots)]


def cross_task(arm: int) -> Task:
    """A plus-shaped corridor: four arms of ``arm`` cells around a centre start cell."""
    if arm < 1:
        raise ValueError(f'arm length must be at least 1, got {arm}')
    size = 2 * arm + 1
    blocked = [(x, y) for y in range(size) for x in range(size) if x != arm and y != arm]
    return grid_task(size, size, start=(arm, arm), blocked=blocked)


def cross_hypotheses(arm: int, reach: int = 2) -> List[str]:
    """The cell ``reach`` steps out along each arm, capped at the arm length."""
    size, step = 2 * arm + 1, min(reach, arm)
    spots = [(arm + step, arm), (arm, arm + step), (arm - step, arm), (arm, arm - step)]
    return [f'pos={cell(x, y, size)}' for x, y in spots]


def switches_task(count: int) -> Task:
    """``count`` independent lamps, all off; unit-cost ``switch-on lN`` and ``switch-off lN``."""
    variables = tuple(Variable(f'lamp-{i}', 2, ('off', 'on')) for i in range(count))
    operators = []
    for i in range(count):
        operators.append(Operator(f'switch-on l{i}', PartialState(((i, 0),)), PartialState(((i, 1),))))
        operators.append(Operator(f'switch-off l{i}', PartialState(((i, 1),)), PartialState(((i, 0),))))
    operators.sort(key=lambda op: op.label)
    return Task(variables, tuple(operators), CompleteState((0,) * count))


def switches_hypotheses(count: int) -> List[str]:
    """Lower half, upper half, even and odd lamps on."""
    if count < 4:
        raise ValueError(f'need at least 4 lamps, got {count}')
    half = count // 2
    groups = [range(half), range(half, count), range(0, count, 2), range(1, count, 2)]
    return [', '.join(f'lamp-{i}=on' for i in group) for group in groups]


def _block_names(n: int) -> List[str]:
    return [chr(ord('a') + i) for i in range(n)]


def blocks_task(towers: Sequence[Sequence[str]]) -> Task:
    """
    Blocks world with a single arm.

    ``towers`` lists the initial towers bottom-up, e.g. ``[['a', 'b'], ['c']]``.
    Variables: ``pos-X`` (table, on Y, held), ``clear-X`` (yes, no) and ``hand``.
    """
    blocks = sorted(b for tower in towers for b in tower)
    variables = []
    var_index: Dict[str, int] = {}
    for b in blocks:
        var_index[f'pos-{b}'] = len(variables)
        values = (TABLE,) + tuple(f'on {other}' for other in blocks if other != b) + (HELD,)
        variables.append(Variable(f'pos-{b}', len(values), values))
    for b in blocks:
        var_index[f'clear-{b}'] = len(variables)
        variables.append(Variable(f'clear-{b}', 2, ('yes', 'no')))
    var_index['hand'] = len(variables)
    variables.append(Variable('hand', 2, ('empty', 'full')))

    def atom(name: str, value: str) -> Tuple[int, int]:
        var = var_index[name]
        return var, variables[var].value_names.index(value)

    def op(label, pre, eff):
        return Operator(label, PartialState(tuple(atom(*a) for a in pre)),
                        PartialState(tuple(atom(*a) for a in eff)))

    operators = []
    for b in blocks:
        operators.append(op(f'pick-up {b}',
                            [(f'pos-{b}', TABLE), (f'clear-{b}', 'yes'), ('hand', 'empty')],
                            [(f'pos-{b}', HELD), (f'clear-{b}', 'no'), ('hand', 'full')]))
        operators.append(op(f'put-down {b}',
                            [(f'pos-{b}', HELD)],
                            [(f'pos-{b}', TABLE), (f'clear-{b}', 'yes'), ('hand', 'empty')]))
        for c in blocks:
            if c == b:
                continue
            operators.append(op(f'unstack {b} {c}',
                                [(f'pos-{b}', f'on {c}'), (f'clear-{b}', 'yes'), ('hand', 'empty')],
                                [(f'pos-{b}', HELD), (f'clear-{b}', 'no'), (f'clear-{c}', 'yes'),
                                 ('hand', 'full')]))
            operators.append(op(f'stack {b} {c}',
                                [(f'pos-{b}', HELD), (f'clear-{c}', 'yes')],
                                [(f'pos-{b}', f'on {c}'), (f'clear-{b}', 'yes'), (f'clear-{c}', 'no'),
                                 ('hand', 'empty')]))
    operators.sort(key=lambda o: o.label)

    values = [0] * len(variables)
    for tower in towers:
        for height, b in enumerate(tower):
            below = TABLE if height == 0 else f'on {tower[height - 1]}'
            values[atom(f'pos-{b}', below)[0]] = atom(f'pos-{b}', below)[1]
            clear = 'yes' if height == len(tower) - 1 else 'no'
            values[atom(f'clear-{b}', clear)[0]] = atom(f'clear-{b}', clear)[1]
    values[var_index['hand']] = 0
    return Task(tuple(variables), tuple(operators), CompleteState(tuple(values)))


def tower_hypothesis(tower: Sequence[str]) -> str:
    """Hypothesis line for a single tower, bottom-up."""
    atoms = [f'pos-{tower[0]}={TABLE}']
    atoms += [f'pos-{upper}=on {lower}' for lower, upper in zip(tower, tower[1:])]
    return ', '.join(atoms)


def blocks_hypotheses(blocks: Sequence[str]) -> List[str]:
    """Four tower goals over ``blocks``."""
    blocks = list(blocks)
    orders = [blocks, blocks[::-1], blocks[1:] + blocks[:1], blocks[-1:] + blocks[:-1]]
    return [tower_hypothesis(order) for order in dict.fromkeys(tuple(o) for o in orders)]


def random_task(rng: random.Random, variables: int = 3, domain_size: int = 3, operators: int = 8,
                max_preconditions: int = 2, max_effects: int = 2) -> Task:
    """
    A random goal-less task with unit costs.

    At least one operator is applicable in the initial state.
    """
    domains = [rng.randint(2, domain_size) for _ in range(variables)]
    task_variables = tuple(
        Variable(f'v{i}', size, tuple(f'x{j}' for j in range(size))) for i, size in enumerate(domains))
    initial = tuple(rng.randrange(size) for size in domains)
    ops = []
    for k in range(operators):
        effect_vars = rng.sample(range(variables), rng.randint(1, min(max_effects, variables)))
        pre_vars = rng.sample(range(variables), rng.randint(0, min(max_preconditions, variables)))
        if k == 0:
            pre = {var: initial[var] for var in pre_vars}
        else:
            pre = {var: rng.randrange(domains[var]) for var in pre_vars}
        eff = {var: rng.randrange(domains[var]) for var in effect_vars}
        ops.append(Operator(f'op{k}', PartialState.from_dict(pre), PartialState.from_dict(eff)))
    return Task(task_variables, tuple(ops), CompleteState(initial))


def random_goal(rng: random.Random, task: Task, size: Optional[int] = None) -> PartialState:
    size = size or rng.randint(1, min(2, len(task.variables)))
    chosen = rng.sample(range(len(task.variables)), size)
    return PartialState.from_dict({var: rng.randrange(task.variables[var].domain_size) for var in chosen})
