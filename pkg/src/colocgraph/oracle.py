"""Brute-force reference miner.

Works straight from the definitions: all-pairs haversine, nested loops over
feature instance lists, every pattern up to the size limit, no apriori
pruning and no graph or spatial index.
"""

from __future__ import annotations

import itertools
import time

from .geo import haversine_km
from .ingest import Dataset
from .miner import MiningResult
from .prevalence import compute_prevalence, singleton_report

DEFAULT_INSTANCE_CAP = 2000


class OracleRefused(RuntimeError):
    pass


class _Neighbors:
    def __init__(self, dataset: Dataset, radius_km: float):
        self.ids = [i.id for i in dataset.instances]
        pts = [(i.location.lat, i.location.lng) for i in dataset.instances]
        feats = [i.feature.ordinal for i in dataset.instances]
        n = len(pts)
        self.near = [[False] * n for _ in range(n)]
        for a in range(n):
            for b in range(n):
                if a != b and feats[a] != feats[b]:
                    self.near[a][b] = haversine_km(*pts[a], *pts[b]) <= radius_km
        self.by_feature = [[] for _ in dataset.features]
        for idx, f in enumerate(feats):
            self.by_feature[f].append(idx)

    def rows(self, pattern):
        """All tuples, one instance per feature, whose members are pairwise near."""
        lists = [self.by_feature[f] for f in pattern]
        near = self.near
        out = []

        def extend(prefix, depth):
            if depth == len(lists):
                out.append(tuple(prefix))
                return
            for x in lists[depth]:
                if all(near[p][x] for p in prefix):
                    prefix.append(x)
                    extend(prefix, depth + 1)
                    prefix.pop()

        extend([], 0)
        return out


def _check_cap(dataset, cap, allow_large):
    if not allow_large and len(dataset.instances) > cap:
        raise OracleRefused(f"oracle refuses {len(dataset.instances)} instances (cap {cap}); pass an override to force")


def oracle_row_instances(dataset: Dataset, radius_km: float, pattern, *,
                         cap: int = DEFAULT_INSTANCE_CAP, allow_large: bool = False) -> set[tuple]:
    """Row instances of ``pattern`` as tuples of instance ids."""
    _check_cap(dataset, cap, allow_large)
    nb = _Neighbors(dataset, radius_km)
    return {tuple(nb.ids[i] for i in row) for row in nb.rows(tuple(pattern))}


def oracle_mine(dataset: Dataset, radius_km: float, min_prev: float, max_size: int, *,
                cap: int = DEFAULT_INSTANCE_CAP, allow_large: bool = False,
                emit_instances: bool = False) -> MiningResult:
    """Mine by exhaustive enumeration; patterns without row instances are never reported."""
    _check_cap(dataset, cap, allow_large)
    nb = _Neighbors(dataset, radius_km)
    counts = dataset.feature_counts()
    present = [f.ordinal for f in dataset.features if counts[f.ordinal] > 0]

    result = MiningResult()
    result.levels[1] = [singleton_report(f, counts) for f in present]
    for size in range(2, max_size + 1):
        t0 = time.perf_counter()
        level = []
        for pattern in itertools.combinations(present, size):
            rows = nb.rows(pattern)
            if not rows:
                continue
            participants = [{r[i] for r in rows} for i in range(size)]
            rep = compute_prevalence(pattern, participants, counts, len(rows))
            if rep.participation_index >= min_prev:
                level.append(rep)
                if emit_instances:
                    result.instances[pattern] = sorted(rows)
        result.per_size_seconds[size] = time.perf_counter() - t0
        if level:
            result.levels[size] = level
    return result
