"""Iterative apriori mining of prevalent co-location patterns over a
neighborhood graph, with three interchangeable clique enumeration strategies:

* ``enum_g``: cycles by graph traversal, chords checked against the graph
* ``enum_k``: cycles by graph traversal, validated by two prefix lookups in the
  previous generation's clique store
* ``extend``: candidates joined from the previous generation's clique store,
  validated by a single edge lookup
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from . import store as _store
from .graph import NeighborhoodGraph, get_cycles, is_clique
from .prevalence import PrevalenceReport, apriori_gen, compute_prevalence, singleton_report
from .store import CliqueStore, PatternStore, join_groups

ALGORITHMS = ("enum_g", "enum_k", "extend")


@dataclass
class MiningParams:
    min_prev: float = 0.1
    max_size: int = 4
    algorithm: str = "extend"
    emit_instances: bool = False
    thread_count: int = 1

    def __post_init__(self):
        if not 0.0 <= self.min_prev or self.min_prev != self.min_prev:
            raise ValueError("min_prev must be a non-negative fraction")
        if self.max_size < 2:
            raise ValueError("max_size must be >= 2")
        if self.thread_count < 1:
            raise ValueError("thread_count must be positive")
        self.algorithm = self.algorithm.replace("-", "_")
        if self.algorithm not in ALGORITHMS + ("oracle",):
            raise ValueError(f"unknown algorithm: {self.algorithm}")


@dataclass
class MiningResult:
    levels: dict[int, list[PrevalenceReport]] = field(default_factory=dict)
    instances: dict[tuple, list[tuple]] = field(default_factory=dict)
    per_size_seconds: dict[int, float] = field(default_factory=dict)

    @property
    def total_seconds(self) -> float:
        return sum(self.per_size_seconds.values())

    def reports(self) -> list[PrevalenceReport]:
        return [r for size in sorted(self.levels) for r in self.levels[size]]

    def patterns(self) -> dict[tuple, float]:
        return {r.pattern: r.participation_index for r in self.reports()}


def _report(g: NeighborhoodGraph, part: PatternStore) -> PrevalenceReport:
    return compute_prevalence(part.pattern, part.participants, g.feature_counts, part.row_count)


def _task_enum_g(g, candidate, previous):
    part = PatternStore(candidate, keep_entries=False)
    rows = [] if previous is _COLLECT else None
    for cyc in get_cycles(g, candidate):
        if is_clique(g, cyc):
            part.insert(cyc)
            if rows is not None:
                rows.append(cyc)
    return part, rows


def _task_enum_k(g, candidate, previous):
    part = PatternStore(candidate)
    validate = _store.validate_clique
    for cyc in get_cycles(g, candidate):
        # size 2/3 cycles are cliques; they are still stored as parents for size 4
        if len(cyc) <= 3 or validate(previous, candidate, cyc):
            part.insert(cyc)
    return part, None


def _task_extend(g, candidate, previous):
    part = PatternStore(candidate)
    if len(candidate) == 2:
        for edge in get_cycles(g, candidate):
            part.insert(edge)
        return part, None
    # one edge lookup per candidate (prefix, v, w): is w a neighbor of v?
    last_feature = candidate[-1]
    adj = g.adjacency
    empty = frozenset()
    for prefix, vs, ws in join_groups(previous, candidate):
        for v in vs:
            nbrs = adj[v].get(last_feature, empty)
            part.insert_many(prefix + (v,), [w for w in ws if w in nbrs])
    return part, None


_TASKS = {"enum_g": _task_enum_g, "enum_k": _task_enum_k, "extend": _task_extend}
_COLLECT = object()


def mine(g: NeighborhoodGraph, params: MiningParams) -> MiningResult:
    if params.algorithm not in _TASKS:
        raise ValueError(f"mine() does not run {params.algorithm!r}")
    task = _TASKS[params.algorithm]
    keeps_store = params.algorithm != "enum_g"
    counts = g.feature_counts

    result = MiningResult()
    result.levels[1] = [singleton_report(f.ordinal, counts) for f in g.features if counts[f.ordinal] > 0]
    prevalent = [r.pattern for r in result.levels[1]]
    previous = CliqueStore()

    pool = ThreadPoolExecutor(params.thread_count) if params.thread_count > 1 else None
    try:
        for size in range(2, params.max_size + 1):
            t0 = time.perf_counter()
            candidates = apriori_gen(prevalent)
            ctx = _COLLECT if (params.emit_instances and not keeps_store) else previous
            if pool is None:
                outcomes = [task(g, c, ctx) for c in candidates]
            else:
                outcomes = list(pool.map(lambda c: task(g, c, ctx), candidates))

            current = CliqueStore()
            level = []
            for cand, (part, rows) in zip(candidates, outcomes):
                if part.row_count == 0:
                    continue
                rep = _report(g, part)
                if rep.participation_index >= params.min_prev:
                    level.append(rep)
                    if keeps_store:
                        current[cand] = part
                    if params.emit_instances:
                        result.instances[cand] = sorted(rows if rows is not None else part.rows())
            result.per_size_seconds[size] = time.perf_counter() - t0
            if not level:
                break
            result.levels[size] = level
            prevalent = [r.pattern for r in level]
            previous = current
    finally:
        if pool is not None:
            pool.shutdown()
    return result


def mine_enum_g(g, params: MiningParams) -> MiningResult:
    return mine(g, _with_algorithm(params, "enum_g"))


def mine_enum_k(g, params: MiningParams) -> MiningResult:
    return mine(g, _with_algorithm(params, "enum_k"))


def mine_extend(g, params: MiningParams) -> MiningResult:
    return mine(g, _with_algorithm(params, "extend"))


def _with_algorithm(params, name):
    if params.algorithm == name:
        return params
    return MiningParams(params.min_prev, params.max_size, name, params.emit_instances, params.thread_count)
