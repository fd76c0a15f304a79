"""Helpers for scale experiments: radius calibration and timed miner runs."""

from __future__ import annotations

import time

from .graph import NeighborhoodGraph, build_graph
from .ingest import Dataset
from .miner import ALGORITHMS, MiningParams, MiningResult, mine


def mean_degree(g: NeighborhoodGraph) -> float:
    return 2.0 * g.edge_count / max(1, len(g))


def radius_for_mean_degree(dataset: Dataset, target: float, start_km: float = 0.05) -> float:
    """Smallest radius whose neighborhood graph reaches ``target`` mean degree.

    Builds once at a radius large enough, then reads the answer off the sorted
    edge distances (degree at radius r is 2 * #{edges with d <= r} / N).
    """
    n = len(dataset.instances)
    need = int(round(target * n / 2.0))
    if need <= 0:
        return 0.0
    r = start_km
    while True:
        g = build_graph(dataset, r)
        if g.edge_count >= need:
            break
        r *= 2.0
        if r > 20000:
            raise ValueError(f"mean degree {target} is unreachable for this dataset")
    distances = sorted(g.edges.values())
    return distances[need - 1]


def time_all(g: NeighborhoodGraph, min_prev: float, max_size: int, threads: int = 1) -> dict[str, MiningResult]:
    out = {}
    for alg in ALGORITHMS:
        t0 = time.perf_counter()
        out[alg] = mine(g, MiningParams(min_prev, max_size, alg, False, threads))
        out[alg].wall_seconds = time.perf_counter() - t0
    return out
