"""
Benchmark datasets: generation of recognition problems and the benchmark runner.

A dataset is a directory tree with one bundle per recognition problem::

    <domain>/<task>/g<k>/o<level>-<n>/
        task.sas  hyps.txt  real_goal.txt  obs.txt  [obs_noisy.txt]
        solution.txt  plan.txt  meta.json

plus a ``manifest.json`` at the root listing generated and skipped bundles.
"""

import json
import logging
import random
from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from django.conf import settings

from .counting import IMPROVED
from .exceptions import (
    AllInfeasible, DatasetFormatError, EmptyPlan, InputError, NoNoiseCandidates, ResourceLimit, Unsolvable,
)
from .linear import INF, LP
from .observations import (
    denoise, inject_noise, read_observations, sample_observations, write_observations,
)
from .recognizer import agreement_ratio, goal_ids, read_hypotheses, recognize, write_hypotheses
from .sas import PartialState, Task, load_task, serialize_sas, without_goal
from .search import optimal_cost, reference_solution_set, weighted_plan

logger = logging.getLogger(__name__)

DATASET_VERSION = 1
SUBOPTIMAL_WEIGHT = 2
SEQUENCES_PER_LEVEL = 3

BUNDLE_FILES = ('task.sas', 'hyps.txt', 'real_goal.txt', 'obs.txt', 'solution.txt', 'meta.json')


@dataclass
class GenerationManifest:
    instances: List[str] = field(default_factory=list)
    skipped: List[Dict[str, str]] = field(default_factory=list)

    def skip(self, name: str, reason: str):
        logger.warning('skipping %s: %s', name, reason)
        self.skipped.append({'instance': name, 'reason': reason})


def discover_domain_tasks(domain_dir) -> List[tuple]:
    """(domain, task name, task path, hypotheses path) for every ``<task>.sas`` with hypotheses."""
    domain_dir = Path(domain_dir)
    if not domain_dir.is_dir():
        raise DatasetFormatError(f'{domain_dir} is not a directory')
    found = []
    for domain in sorted(p for p in domain_dir.iterdir() if p.is_dir()):
        for task_path in sorted(domain.glob('*.sas')):
            hyps_path = task_path.with_name(f'{task_path.stem}.hyps.txt')
            if not hyps_path.exists():
                raise DatasetFormatError(f'{task_path} has no {hyps_path.name}')
            found.append((domain.name, task_path.stem, task_path, hyps_path))
    if not found:
        raise DatasetFormatError(f'no tasks found under {domain_dir}')
    return found


def generate_dataset(domain_dir, out, suboptimal: bool = False, noise: bool = False, seed: int = 0,
                     observabilities: Optional[Sequence[int]] = None, goals_per_task: int = 4,
                     sequences: int = SEQUENCES_PER_LEVEL, noise_rate=None) -> GenerationManifest:
    """
    Generate recognition problems for every task under ``domain_dir``.

    Each of the first ``goals_per_task`` hypotheses is used as the real goal
    in turn. Its plan is optimal, or found by weighted A* (w=2) when
    ``suboptimal`` is set. Every observability level below 100% gets
    ``sequences`` sampled observation sequences; 100% gets the full plan.
    Bundles whose reference solution set exceeds the search budget are
    skipped and listed in the manifest.
    """
    observabilities = tuple(observabilities or settings.RECOGNITION_OBSERVABILITIES)
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    manifest = GenerationManifest()

    for domain, task_name, task_path, hyps_path in discover_domain_tasks(domain_dir):
        task = without_goal(load_task(task_path))
        hyps = read_hypotheses(task, hyps_path)[:goals_per_task]
        for goal_number, goal in enumerate(hyps, start=1):
            prefix = f'{domain}/{task_name}/g{goal_number}'
            try:
                optimal = optimal_cost(task, goal)
                if not optimal.solved:
                    raise Unsolvable('goal is unreachable')
                plan_result = weighted_plan(task, goal, SUBOPTIMAL_WEIGHT) if suboptimal else optimal
                if not len(plan_result.plan):
                    raise EmptyPlan('goal already holds in the initial state')
            except (ResourceLimit, Unsolvable, EmptyPlan) as exc:
                manifest.skip(prefix, str(exc))
                continue
            plan = plan_result.plan
            for level in observabilities:
                for number in range(1 if level == 100 else sequences):
                    name = f'{prefix}/o{level}-{number}'
                    rng = random.Random(f'{seed}/{name}')
                    try:
                        _write_bundle(out / name, task, hyps, goal, plan, level, rng, noise, noise_rate, {
                            'domain': domain, 'task': task_name, 'goal': goal_number,
                            'observability': level, 'sequence': number, 'seed': seed,
                            'suboptimal': suboptimal, 'plan_cost': plan_result.cost,
                            'optimal_cost': optimal.cost,
                        })
                    except (ResourceLimit, NoNoiseCandidates) as exc:
                        manifest.skip(name, str(exc))
                        continue
                    manifest.instances.append(name)

    (out / 'manifest.json').write_text(json.dumps({
        'version': DATASET_VERSION,
        'seed': seed,
        'suboptimal': suboptimal,
        'noise': noise,
        'instances': manifest.instances,
        'skipped': manifest.skipped,
    }, indent=2), encoding='utf-8')
    logger.info('generated %d bundles (%d skipped) in %s', len(manifest.instances), len(manifest.skipped), out)
    return manifest


def _write_bundle(path: Path, task: Task, hyps, goal: PartialState, plan, level: int, rng: random.Random,
                  noise: bool, noise_rate, meta: dict):
    omega = sample_observations(plan, Fraction(level, 100), rng)
    noisy = inject_noise(omega, task, plan, rng, rate=noise_rate) if noise else None
    solution = reference_solution_set(task, hyps, denoise(omega, plan), plan, goal)

    path.mkdir(parents=True, exist_ok=True)
    (path / 'task.sas').write_text(serialize_sas(task), encoding='utf-8')
    write_hypotheses(task, hyps, path / 'hyps.txt')
    write_hypotheses(task, [goal], path / 'real_goal.txt')
    write_observations(omega, path / 'obs.txt')
    if noisy is not None:
        write_observations(noisy, path / 'obs_noisy.txt')
    write_hypotheses(task, [g for g in hyps if g in solution], path / 'solution.txt')
    write_observations(plan, path / 'plan.txt', comments=[f'cost = {meta["plan_cost"]}'])
    (path / 'meta.json').write_text(json.dumps(meta, indent=2, sort_keys=True), encoding='utf-8')


# Benchmark runner

@dataclass
class InstanceResult:
    name: str
    domain: str
    observability: int
    agreement: Fraction
    h_omega_real: float
    rows: float
    total_time: float
    lp_time: float
    reference: List[str]
    answer: List[str]


@dataclass
class LevelSummary:
    domain: str
    observability: int
    instances: int
    agr: float
    avg_h_omega: Optional[float]
    avg_rows: float
    total_time: float
    lp_time: float


@dataclass
class BenchmarkReport:
    heuristic: str
    epsilon: float
    mode: str
    levels: List[LevelSummary]
    instances: List[InstanceResult]

    @property
    def mean_agr(self) -> float:
        if not self.instances:
            return 0.0
        return float(sum(r.agreement for r in self.instances) / len(self.instances))


def discover_bundles(dataset) -> List[Path]:
    dataset = Path(dataset)
    if not dataset.is_dir():
        raise DatasetFormatError(f'{dataset} is not a dataset directory')
    bundles = sorted(p.parent for p in dataset.rglob('meta.json'))
    if not bundles:
        raise DatasetFormatError(f'no problem bundles found in {dataset}')
    return bundles


def _ids_of(hyps: Sequence[PartialState], goals: Sequence[PartialState]) -> List[str]:
    ids = goal_ids(len(hyps))
    return [ids[i] for i, hyp in enumerate(hyps) if hyp in goals]


def run_instance(bundle: Path, dataset: Path, heuristic: str, eps, mode: str = LP,
                 backend: Optional[str] = None, noisy: bool = True) -> InstanceResult:
    missing = [name for name in BUNDLE_FILES if not (bundle / name).exists()]
    if missing:
        raise DatasetFormatError(f'{bundle}: missing {", ".join(missing)}')
    try:
        meta = json.loads((bundle / 'meta.json').read_text(encoding='utf-8'))
        task = load_task(bundle / 'task.sas')
        hyps = read_hypotheses(task, bundle / 'hyps.txt')
        real_goal = read_hypotheses(task, bundle / 'real_goal.txt')[0]
        reference = read_hypotheses(task, bundle / 'solution.txt')
        observed = bundle / 'obs_noisy.txt' if noisy and (bundle / 'obs_noisy.txt').exists() else bundle / 'obs.txt'
        omega = read_observations(observed)
        domain, observability = meta['domain'], int(meta['observability'])
    except (InputError, ValueError, KeyError, IndexError) as exc:
        raise DatasetFormatError(f'{bundle}: {exc}') from None

    name = bundle.relative_to(dataset).as_posix()
    reference_ids = _ids_of(hyps, reference)
    real_id = _ids_of(hyps, [real_goal])
    try:
        result = recognize(task, hyps, omega, eps, heuristic=heuristic, mode=mode, backend=backend)
    except AllInfeasible:
        logger.warning('%s: every hypothesis is infeasible', name)
        return InstanceResult(name, domain, observability, agreement_ratio(reference_ids, []), INF,
                              0, 0.0, 0.0, reference_ids, [])
    answer = result.ordered_solution
    h_omega_real = result.per_goal[real_id[0]].h_omega if real_id else INF
    return InstanceResult(name, domain, observability, agreement_ratio(reference_ids, answer), h_omega_real,
                          result.rows, result.total_time, result.lp_time, reference_ids, answer)


def summarize(results: Sequence[InstanceResult]) -> List[LevelSummary]:
    groups = defaultdict(list)
    for result in sorted(results, key=lambda r: r.name):
        groups[(result.domain, result.observability)].append(result)
    levels = []
    for (domain, observability), group in sorted(groups.items()):
        finite = [r.h_omega_real for r in group if r.h_omega_real != INF]
        levels.append(LevelSummary(
            domain,
            observability,
            len(group),
            float(sum(r.agreement for r in group) / len(group)),
            float(sum(finite) / len(finite)) if finite else None,
            float(sum(Fraction(r.rows) for r in group) / len(group)),
            sum(r.total_time for r in group),
            sum(r.lp_time for r in group),
        ))
    return levels


def run_benchmark(dataset, heuristic: str = IMPROVED, eps=0, mode: str = LP, backend: Optional[str] = None,
                  workers: Optional[int] = None, noisy: bool = True) -> BenchmarkReport:
    """
    Recognize every bundle of ``dataset`` and aggregate per (domain, observability).

    Instances run in a thread pool; results are ordered by bundle path before
    aggregation, so reports do not depend on completion order.
    """
    dataset = Path(dataset)
    bundles = discover_bundles(dataset)
    workers = workers or getattr(settings, 'RECOGNITION_BENCH_WORKERS', 1)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(
            lambda bundle: run_instance(bundle, dataset, heuristic, eps, mode, backend, noisy), bundles))
    results.sort(key=lambda r: r.name)
    report = BenchmarkReport(heuristic, float(Fraction(str(eps))), mode, summarize(results), results)
    logger.info('benchmark over %d instances: mean agreement %.4f', len(results), report.mean_agr)
    return report
