"""
Linear and integer programs over operator counts.

``LinearModel`` is a plain container (columns with bounds and objective
coefficients, two-sided rows, minimization). ``solve`` runs either the
internal dense two-phase simplex or scipy's HiGHS on the LP relaxation;
IP mode wraps the chosen backend in a best-first branch-and-bound.
"""

import copy
import heapq
import logging
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, TextIO, Tuple

import numpy as np
from django.conf import settings
from scipy.optimize import linprog

from .exceptions import IterationLimit, NumericalFailure, SolverError

logger = logging.getLogger(__name__)

INF = math.inf

OPTIMAL = 'optimal'
INFEASIBLE = 'infeasible'
UNBOUNDED = 'unbounded'

LP = 'lp'
IP = 'ip'
MODES = (LP, IP)

SIMPLEX = 'simplex'
HIGHS = 'highs'
BACKENDS = (SIMPLEX, HIGHS)

# Consecutive degenerate pivots before switching from Dantzig to Bland pricing.
DEGENERATE_PIVOT_LIMIT = 50


@dataclass
class Column:
    name: str
    objective: Fraction = Fraction(0)
    lower: Fraction = Fraction(0)
    upper: float = INF


@dataclass
class Row:
    name: str
    coefficients: Dict[int, Fraction]
    lower: float = -INF
    upper: float = INF

    def activity(self, values: Sequence) -> float:
        return sum(coef * values[j] for j, coef in self.coefficients.items())


@dataclass
class LinearModel:
    """
    Minimization model; columns are addressed by name or index.

    Attributes:
        columns: decision variables in insertion order
        rows: constraints in insertion order
        infeasible: set by builders that already know no solution exists
    """
    columns: List[Column] = field(default_factory=list)
    rows: List[Row] = field(default_factory=list)
    infeasible: bool = False
    _index: Dict[str, int] = field(default_factory=dict, repr=False)

    def copy(self) -> 'LinearModel':
        return copy.deepcopy(self)

    def add_column(self, name: str, objective=0, lower=0, upper=INF) -> int:
        if name in self._index:
            raise ValueError(f'duplicate column {name!r}')
        self._index[name] = len(self.columns)
        self.columns.append(Column(name, Fraction(objective), Fraction(lower), upper))
        return self._index[name]

    def has_column(self, name: str) -> bool:
        return name in self._index

    def column_index(self, name: str) -> int:
        return self._index[name]

    def add_row(self, name: str, coefficients: Mapping, lower=-INF, upper=INF) -> Row:
        """Add ``lower <= sum(coef * column) <= upper``; keys are names or indices."""
        resolved: Dict[int, Fraction] = {}
        for key, coef in coefficients.items():
            j = self._index[key] if isinstance(key, str) else key
            if not 0 <= j < len(self.columns):
                raise ValueError(f'row {name!r} references unknown column {key!r}')
            resolved[j] = resolved.get(j, Fraction(0)) + Fraction(coef)
        row = Row(name, {j: c for j, c in sorted(resolved.items()) if c != 0}, lower, upper)
        self.rows.append(row)
        return row

    @property
    def row_count(self) -> int:
        return len(self.rows)

    @property
    def column_names(self) -> List[str]:
        return [column.name for column in self.columns]

    def objective_value(self, assignment: Mapping[str, float]):
        return sum(column.objective * assignment.get(column.name, 0) for column in self.columns)

    def violations(self, assignment: Mapping[str, float], tolerance: float = 1e-6) -> List[str]:
        """Names of rows and column bounds that ``assignment`` breaks."""
        values = [assignment.get(column.name, 0) for column in self.columns]
        broken = []
        for column, value in zip(self.columns, values):
            if value < column.lower - tolerance or value > column.upper + tolerance:
                broken.append(f'bound:{column.name}')
        for row in self.rows:
            activity = row.activity(values)
            if activity < row.lower - tolerance or activity > row.upper + tolerance:
                broken.append(row.name)
        return broken


@dataclass
class LpOutcome:
    status: str
    objective: Optional[float] = None
    values: Dict[str, float] = field(default_factory=dict)
    iterations: int = 0
    nodes: int = 0

    @property
    def value(self):
        """Objective when optimal; infinity when infeasible."""
        if self.status == OPTIMAL:
            return self.objective
        return INF


# Internal dense simplex

class _Tableau:
    """
    Two-phase primal simplex over a dense tableau.

    Rows are in the form ``a.x + s = b`` with ``s >= 0``; rows with ``b < 0``
    are negated and receive an artificial column. The last tableau row holds
    reduced costs, the last column the right-hand side.
    """

    def __init__(self, A, b, c, exact: bool, tolerance, max_iterations: int, bland: bool):
        self.exact = exact
        self.tol = tolerance
        self.max_iterations = max_iterations
        self.bland = bland
        self.iterations = 0
        dtype = object if exact else float
        m, n = A.shape
        self.n = n
        negative = [i for i in range(m) if b[i] < 0]
        self.n_art = len(negative)
        width = n + m + self.n_art + 1
        T = np.zeros((m + 1, width), dtype=dtype)
        one = Fraction(1) if exact else 1.0
        if exact:
            T[:, :] = Fraction(0)
        T[:m, :n] = A
        T[:m, -1] = b
        for i in range(m):
            T[i, n + i] = one
        self.basis = [n + i for i in range(m)]
        for k, i in enumerate(negative):
            T[i, :] = -T[i, :]
            T[i, n + m + k] = one
            self.basis[i] = n + m + k
        self.T = T
        self.c = c
        self.m = m

    def _pivot(self, r: int, j: int):
        T = self.T
        T[r] = T[r] / T[r, j]
        col = T[:, j].copy()
        col[r] = 0
        T -= np.outer(col, T[r])
        if not self.exact:
            T[np.abs(T) < 1e-12] = 0.0
        self.basis[r] = j
        self.iterations += 1
        if self.iterations > self.max_iterations:
            raise IterationLimit(f'simplex exceeded {self.max_iterations} pivots')

    def _entering(self, allowed: int, bland: bool) -> Optional[int]:
        if not allowed:
            return None
        costs = self.T[-1, :allowed]
        if bland:
            for j in range(allowed):
                if costs[j] < -self.tol:
                    return j
            return None
        j = int(np.argmin(costs))
        return j if costs[j] < -self.tol else None

    def _leaving(self, j: int) -> Optional[int]:
        best, best_ratio = None, None
        for i in range(self.m):
            a = self.T[i, j]
            if a > self.tol:
                ratio = self.T[i, -1] / a
                if (best is None or ratio < best_ratio
                        or (ratio == best_ratio and self.basis[i] < self.basis[best])):
                    best, best_ratio = i, ratio
        return best

    def _run(self, allowed: int) -> bool:
        """Pivot to optimality over the first ``allowed`` columns; False if unbounded."""
        degenerate = 0
        bland = self.bland
        while True:
            j = self._entering(allowed, bland)
            if j is None:
                return True
            r = self._leaving(j)
            if r is None:
                return False
            if self.T[r, -1] <= self.tol:
                degenerate += 1
                if degenerate >= DEGENERATE_PIVOT_LIMIT and not bland:
                    logger.debug('switching to Bland pricing after %d degenerate pivots', degenerate)
                    bland = True
            else:
                degenerate = 0
            self._pivot(r, j)

    def solve(self):
        n, m = self.n, self.m
        T = self.T
        if self.n_art:
            # Phase 1: minimize the sum of artificials.
            T[-1, :] = 0
            T[-1, n + m:-1] = 1
            for i, var in enumerate(self.basis):
                if var >= n + m:
                    T[-1, :] -= T[i, :]
            self._run(T.shape[1] - 1)
            if -T[-1, -1] > self.tol * max(1, m):
                return INFEASIBLE, None
            self._drop_artificials()
        T = self.T
        T[-1, :] = 0
        T[-1, :n] = self.c
        for i, var in enumerate(self.basis):
            if var < n and self.c[var] != 0:
                T[-1, :] -= self.c[var] * T[i, :]
        if not self._run(n + m):
            return UNBOUNDED, None
        x = [Fraction(0) if self.exact else 0.0] * n
        for i, var in enumerate(self.basis):
            if var < n:
                x[var] = T[i, -1]
        return OPTIMAL, x

    def _drop_artificials(self):
        n, m = self.n, self.m
        keep = []
        for i, var in enumerate(self.basis):
            if var >= n + m:
                candidates = [j for j in range(n + m) if abs(self.T[i, j]) > self.tol]
                if not candidates:
                    continue
                self._pivot(i, candidates[0])
            keep.append(i)
        rows = keep + [self.m]
        self.T = np.delete(self.T[rows], np.s_[n + m:n + m + self.n_art], axis=1)
        self.basis = [self.basis[i] for i in keep]
        self.m = len(keep)
        self.n_art = 0


def _standard_form(model: LinearModel, lower: Sequence, upper: Sequence, exact: bool):
    """Shift columns to zero lower bounds and express every constraint as a.x <= b."""
    n = len(model.columns)
    convert = Fraction if exact else float
    A_rows, b = [], []

    def dense(coefficients, sign):
        row = [convert(0)] * n
        for j, coef in coefficients.items():
            row[j] = convert(coef) * sign
        return row

    for row in model.rows:
        offset = sum(coef * lower[j] for j, coef in row.coefficients.items())
        if row.upper != INF:
            A_rows.append(dense(row.coefficients, 1))
            b.append(convert(row.upper) - convert(offset))
        if row.lower != -INF:
            A_rows.append(dense(row.coefficients, -1))
            b.append(convert(offset) - convert(row.lower))
    for j in range(n):
        if upper[j] != INF:
            A_rows.append(dense({j: 1}, 1))
            b.append(convert(upper[j]) - convert(lower[j]))
    dtype = object if exact else float
    A = np.array(A_rows, dtype=dtype).reshape(len(A_rows), n)
    c = np.array([convert(column.objective) for column in model.columns], dtype=dtype)
    return A, b, c


def _simplex_relaxation(model, lower, upper, exact, tolerance, max_iterations):
    A, b, c = _standard_form(model, lower, upper, exact)
    tol = Fraction(0) if exact else tolerance
    for bland in (False, True):
        tableau = _Tableau(A, b, c, exact, tol, max_iterations, bland)
        status, shifted = tableau.solve()
        if status != OPTIMAL:
            return LpOutcome(status, iterations=tableau.iterations)
        if exact:
            x = [Fraction(lower[j]) + shifted[j] for j in range(len(shifted))]
        else:
            x = [float(lower[j]) + float(shifted[j]) for j in range(len(shifted))]
        assignment = {column.name: x[j] for j, column in enumerate(model.columns)}
        breaches = _bound_breaches(model, x, lower, upper, 0 if exact else tolerance * 10)
        if not breaches:
            return LpOutcome(OPTIMAL, model.objective_value(assignment) if exact
                             else float(model.objective_value(assignment)),
                             assignment, tableau.iterations)
        logger.warning('simplex solution breaks %d row(s); restarting with Bland pricing', len(breaches))
    raise NumericalFailure(f'simplex solution breaks rows {breaches[:5]} after restart')


def _bound_breaches(model, x, lower, upper, tolerance) -> List[str]:
    broken = [model.columns[j].name for j in range(len(x))
              if x[j] < lower[j] - tolerance or x[j] > upper[j] + tolerance]
    for row in model.rows:
        activity = row.activity(x)
        scale = tolerance * max(1, abs(activity))
        if activity < row.lower - scale or activity > row.upper + scale:
            broken.append(row.name)
    return broken


def _highs_relaxation(model, lower, upper, tolerance, max_iterations):
    n = len(model.columns)
    c = np.array([float(column.objective) for column in model.columns])
    A_ub, b_ub = [], []
    for row in model.rows:
        coefs = np.zeros(n)
        for j, coef in row.coefficients.items():
            coefs[j] = float(coef)
        if row.upper != INF:
            A_ub.append(coefs)
            b_ub.append(float(row.upper))
        if row.lower != -INF:
            A_ub.append(-coefs)
            b_ub.append(-float(row.lower))
    bounds = [(float(lower[j]), None if upper[j] == INF else float(upper[j])) for j in range(n)]
    if not n:
        feasible = all(row.lower <= 0 <= row.upper for row in model.rows)
        return LpOutcome(OPTIMAL, 0.0, {}) if feasible else LpOutcome(INFEASIBLE)
    result = linprog(
        c,
        A_ub=np.array(A_ub) if A_ub else None,
        b_ub=np.array(b_ub) if b_ub else None,
        bounds=bounds,
        method='highs',
        options={'primal_feasibility_tolerance': tolerance, 'maxiter': max_iterations},
    )
    if result.status == 0:
        assignment = {column.name: float(result.x[j]) for j, column in enumerate(model.columns)}
        return LpOutcome(OPTIMAL, float(result.fun), assignment, int(getattr(result, 'nit', 0)))
    if result.status == 2:
        return LpOutcome(INFEASIBLE)
    if result.status == 3:
        return LpOutcome(UNBOUNDED)
    if result.status == 1:
        raise IterationLimit(f'HiGHS stopped: {result.message}')
    raise NumericalFailure(f'HiGHS failed: {result.message}')


def _relaxation(model, lower, upper, backend, exact, tolerance, max_iterations):
    if any(lo > up for lo, up in zip(lower, upper)):
        return LpOutcome(INFEASIBLE)
    if backend == SIMPLEX:
        return _simplex_relaxation(model, lower, upper, exact, tolerance, max_iterations)
    if backend == HIGHS:
        if exact:
            raise SolverError('exact arithmetic is only available with the simplex backend')
        return _highs_relaxation(model, lower, upper, tolerance, max_iterations)
    raise SolverError(f'unknown LP backend {backend!r}')


# Branch and bound

def _fractional_column(model, outcome, exact, tolerance) -> Optional[Tuple[int, object]]:
    """The column whose value is farthest from an integer, if any."""
    best, best_gap = None, 0
    for j, column in enumerate(model.columns):
        value = outcome.values[column.name]
        gap = abs(value - round(value))
        if exact:
            if value.denominator != 1 and gap > best_gap:
                best, best_gap = (j, value), gap
        elif gap > tolerance and gap > best_gap:
            best, best_gap = (j, value), gap
    return best


def _round_outcome(model, outcome, exact):
    """Snap an integral float solution to exact integers."""
    if exact:
        return outcome
    values = {name: float(round(value)) for name, value in outcome.values.items()}
    return LpOutcome(OPTIMAL, float(model.objective_value(values)), values,
                     outcome.iterations, outcome.nodes)


def _branch_and_bound(model, backend, exact, tolerance, max_iterations, max_nodes):
    lower = [column.lower for column in model.columns]
    upper = [column.upper for column in model.columns]
    root = _relaxation(model, lower, upper, backend, exact, tolerance, max_iterations)
    if root.status != OPTIMAL:
        return root
    counter = 0
    heap = [(root.objective, counter, lower, upper, root)]
    nodes = 0
    iterations = root.iterations
    while heap:
        bound, _, lo, up, outcome = heapq.heappop(heap)
        nodes += 1
        if nodes > max_nodes:
            raise IterationLimit(f'branch and bound exceeded {max_nodes} nodes')
        branch = _fractional_column(model, outcome, exact, tolerance)
        if branch is None:
            result = _round_outcome(model, outcome, exact)
            result.nodes, result.iterations = nodes, iterations
            return result
        j, value = branch
        floor_value, ceil_value = math.floor(value), math.ceil(value)
        children = []
        down_upper = list(up)
        down_upper[j] = min(up[j], floor_value)
        children.append((lo, down_upper))
        up_lower = list(lo)
        up_lower[j] = max(lo[j], Fraction(ceil_value))
        children.append((up_lower, up))
        for child_lower, child_upper in children:
            child = _relaxation(model, child_lower, child_upper, backend, exact, tolerance, max_iterations)
            iterations += child.iterations
            if child.status != OPTIMAL:
                continue
            counter += 1
            heapq.heappush(heap, (child.objective, counter, child_lower, child_upper, child))
    return LpOutcome(INFEASIBLE, iterations=iterations, nodes=nodes)


def solve(model: LinearModel, mode: str = LP, backend: Optional[str] = None, exact: bool = False,
          tolerance: Optional[float] = None, max_iterations: Optional[int] = None,
          max_nodes: Optional[int] = None) -> LpOutcome:
    """
    Solve ``model`` as an LP relaxation or, in IP mode, with integral columns.

    Args:
        model: the model; a model flagged ``infeasible`` is not handed to a solver
        mode: LP or IP
        backend: 'simplex' or 'highs'; defaults to RECOGNITION_LP_BACKEND
        exact: rational arithmetic (simplex backend only)

    Raises:
        NumericalFailure: tolerance breach after a restart with Bland pricing
        IterationLimit: pivot or node budget exceeded
    """
    if mode not in MODES:
        raise SolverError(f'unknown solve mode {mode!r}')
    backend = backend or getattr(settings, 'RECOGNITION_LP_BACKEND', SIMPLEX)
    tolerance = tolerance if tolerance is not None else getattr(settings, 'RECOGNITION_LP_TOLERANCE', 1e-6)
    if max_iterations is None:
        max_iterations = getattr(settings, 'RECOGNITION_LP_MAX_ITERATIONS', 50_000)
    if max_nodes is None:
        max_nodes = getattr(settings, 'RECOGNITION_IP_MAX_NODES', 20_000)

    if model.infeasible:
        return LpOutcome(INFEASIBLE)
    started = time.perf_counter()
    if mode == IP:
        outcome = _branch_and_bound(model, backend, exact, tolerance, max_iterations, max_nodes)
    else:
        lower = [column.lower for column in model.columns]
        upper = [column.upper for column in model.columns]
        outcome = _relaxation(model, lower, upper, backend, exact, tolerance, max_iterations)
    logger.debug('%s solve (%s): %s objective=%s rows=%d in %.4fs', mode.upper(), backend,
                 outcome.status, outcome.objective, model.row_count, time.perf_counter() - started)
    return outcome


# Fixed-format MPS export

MPS_FIELD_WIDTH = 12


def _mps_number(value) -> str:
    """Format ``value`` for a 12-character MPS field, dropping digits before the exponent."""
    for precision in range(MPS_FIELD_WIDTH, 0, -1):
        text = f'{float(value):.{precision}g}'
        if len(text) <= MPS_FIELD_WIDTH:
            return text
    raise SolverError(f'{value} does not fit a {MPS_FIELD_WIDTH}-character MPS field')


def write_mps(model: LinearModel, stream: TextIO, name: str = 'OPCOUNT'):
    """
    Write ``model`` in fixed MPS.

    Columns are named C0000000.. in column order and rows R0000000.. in
    insertion order; leading ``*`` lines map the short names back.
    """
    column_names = [f'C{j:07d}' for j in range(len(model.columns))]
    row_names = [f'R{i:07d}' for i in range(len(model.rows))]
    for short, column in zip(column_names, model.columns):
        stream.write(f'* {short} {column.name}\n')
    for short, row in zip(row_names, model.rows):
        stream.write(f'* {short} {row.name}\n')
    stream.write(f'NAME          {name}\n')

    stream.write('ROWS\n')
    stream.write(' N  COST\n')
    kinds = []
    for short, row in zip(row_names, model.rows):
        if row.lower == row.upper:
            kind = 'E'
        elif row.lower != -INF:
            kind = 'G'
        elif row.upper != INF:
            kind = 'L'
        else:
            kind = 'N'
        kinds.append(kind)
        stream.write(f' {kind:<2} {short}\n')

    stream.write('COLUMNS\n')
    entries: Dict[int, List[Tuple[str, Fraction]]] = {j: [] for j in range(len(model.columns))}
    for short, row in zip(row_names, model.rows):
        for j, coef in row.coefficients.items():
            entries[j].append((short, coef))
    for j, column in enumerate(model.columns):
        cells = []
        if column.objective != 0:
            cells.append(('COST', column.objective))
        cells += entries[j]
        if not cells:
            cells.append(('COST', 0))
        for row_name, coef in cells:
            stream.write(f'    {column_names[j]:<8}  {row_name:<8}  {_mps_number(coef):>12}\n')

    stream.write('RHS\n')
    for short, row, kind in zip(row_names, model.rows, kinds):
        rhs = row.upper if kind == 'L' else row.lower
        if kind != 'N' and rhs != 0:
            stream.write(f'    {"RHS":<8}  {short:<8}  {_mps_number(rhs):>12}\n')

    ranged = [(short, row) for short, row, kind in zip(row_names, model.rows, kinds)
              if kind == 'G' and row.upper != INF]
    if ranged:
        stream.write('RANGES\n')
        for short, row in ranged:
            stream.write(f'    {"RNG":<8}  {short:<8}  {_mps_number(row.upper - row.lower):>12}\n')

    stream.write('BOUNDS\n')
    for short, column in zip(column_names, model.columns):
        if column.lower != 0:
            stream.write(f' LO {"BND":<8}  {short:<8}  {_mps_number(column.lower):>12}\n')
        if column.upper != INF:
            stream.write(f' UP {"BND":<8}  {short:<8}  {_mps_number(column.upper):>12}\n')
    stream.write('ENDATA\n')
