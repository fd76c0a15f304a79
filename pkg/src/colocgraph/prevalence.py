"""Apriori candidate generation and the participation index."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .geo import is_canonical


@dataclass(frozen=True)
class PrevalenceReport:
    pattern: tuple
    participation_ratios: tuple
    participation_index: float
    row_instance_count: int


def apriori_gen(prevalent: Iterable[tuple]) -> list[tuple]:
    """Join size-(k-1) patterns sharing their first k-2 features, then drop any
    candidate with a size-(k-1) subset missing from the input.
    """
    prev = sorted(set(prevalent))
    if not prev:
        return []
    size = len(prev[0])
    for p in prev:
        if len(p) != size:
            raise ValueError("apriori_gen needs patterns of a single size")
        if not is_canonical(p):
            raise ValueError(f"pattern not canonical: {p}")
    known = set(prev)
    out = []
    # sorted input groups patterns with a common prefix contiguously
    for i, a in enumerate(prev):
        for b in prev[i + 1:]:
            if a[:-1] != b[:-1]:
                break
            cand = a + (b[-1],)
            if all(cand[:j] + cand[j + 1:] in known for j in range(len(cand) - 2)):
                out.append(cand)
    return out


def compute_prevalence(pattern: Sequence[int], participants: Sequence, feature_counts: Sequence[int],
                       row_instance_count: int) -> PrevalenceReport:
    if len(participants) != len(pattern):
        raise ValueError("one participant set per pattern position is required")
    ratios = []
    for f, seen in zip(pattern, participants):
        total = feature_counts[f]
        if total <= 0:
            raise ValueError(f"feature {f} has no instances")
        ratios.append(len(seen) / total)
    return PrevalenceReport(tuple(pattern), tuple(ratios), min(ratios), row_instance_count)


def singleton_report(feature: int, feature_counts: Sequence[int]) -> PrevalenceReport:
    return PrevalenceReport((feature,), (1.0,), 1.0, feature_counts[feature])
