"""Prefix-keyed clique instance store.

A size-m instance (v1, ..., vm) of a pattern is kept as ``prefix -> {vm}``
with ``prefix = (v1, ..., v(m-1))``. Each pattern owns its own partition,
together with the distinct vertices seen at every position.
"""

from __future__ import annotations

from typing import Iterator


class PatternStore:
    """Instances of one pattern.

    With ``keep_entries`` the prefix map is authoritative and the per-position
    participant sets are projected from it on demand. Without it only the
    participant sets and the row count are kept (callers must not insert the
    same row twice).
    """

    __slots__ = ("pattern", "entries", "row_count", "keep_entries", "_seen")

    def __init__(self, pattern: tuple, keep_entries: bool = True):
        self.pattern = tuple(pattern)
        self.entries: dict[tuple, set[int]] = {}
        self.row_count = 0
        self.keep_entries = keep_entries
        self._seen = None if keep_entries else [set() for _ in self.pattern]

    def insert(self, row: tuple) -> None:
        if len(row) != len(self.pattern):
            raise ValueError(f"instance of length {len(row)} does not fit pattern of size {len(self.pattern)}")
        if not self.keep_entries:
            for seen, v in zip(self._seen, row):
                seen.add(v)
            self.row_count += 1
            return
        prefix, last = row[:-1], row[-1]
        values = self.entries.get(prefix)
        if values is None:
            self.entries[prefix] = {last}
        elif last not in values:
            values.add(last)
        else:
            return
        self.row_count += 1

    def insert_many(self, prefix: tuple, lasts) -> None:
        """Insert ``prefix + (w,)`` for every ``w`` in ``lasts``."""
        if len(prefix) != len(self.pattern) - 1:
            raise ValueError("prefix length must be pattern size - 1")
        if not lasts:
            return
        values = self.entries.get(prefix)
        if values is None:
            values = self.entries[prefix] = set()
        before = len(values)
        values.update(lasts)
        self.row_count += len(values) - before

    @property
    def participants(self) -> list[set[int]]:
        if not self.keep_entries:
            return self._seen
        m = len(self.pattern)
        out = [set() for _ in range(m)]
        for prefix, values in self.entries.items():
            for i in range(m - 1):
                out[i].add(prefix[i])
            out[-1].update(values)
        return out

    def contains(self, prefix: tuple, last: int) -> bool:
        values = self.entries.get(prefix)
        return values is not None and last in values

    def rows(self) -> Iterator[tuple]:
        for prefix, values in self.entries.items():
            for v in values:
                yield prefix + (v,)

    def __len__(self):
        return self.row_count


class CliqueStore(dict):
    """One generation of pattern partitions (pattern -> PatternStore)."""

    def partition(self, pattern: tuple) -> PatternStore:
        part = self.get(pattern)
        if part is None:
            part = self[pattern] = PatternStore(pattern)
        return part


def insert_clique(store: CliqueStore, pattern: tuple, row: tuple) -> None:
    store.partition(tuple(pattern)).insert(tuple(row))


def _parents(store: CliqueStore, pattern: tuple) -> tuple[PatternStore, PatternStore]:
    x1 = pattern[:-1]
    x2 = pattern[:-2] + pattern[-1:]
    try:
        return store[x1], store[x2]
    except KeyError as e:
        raise LookupError(f"parent pattern {e.args[0]} of {pattern} has no stored instances") from None


def validate_clique(store: CliqueStore, pattern: tuple, cycle: tuple) -> bool:
    """Two prefix lookups in the size-(k-1) generation decide a size-k cycle.

    Both parents share the first k-2 vertices as key; together they cover every
    pair except (v(k-1), vk), which the cycle already guarantees.
    """
    if len(cycle) < 4:
        return True
    x1, x2 = _parents(store, tuple(pattern))
    key = cycle[:-2]
    return x1.contains(key, cycle[-2]) and x2.contains(key, cycle[-1])


def join_groups(store: CliqueStore, pattern: tuple) -> Iterator[tuple[tuple, set, set]]:
    """Yield ``(prefix, vs, ws)`` for every prefix shared by the two parents of
    ``pattern``: ``vs`` from the parent without the last feature, ``ws`` from
    the parent without the second-to-last one.
    """
    if len(pattern) < 3:
        raise ValueError("clique extension needs a pattern of size >= 3")
    x1, x2 = _parents(store, tuple(pattern))
    a, b = x1.entries, x2.entries
    if len(b) < len(a):
        for prefix, ws in b.items():
            vs = a.get(prefix)
            if vs:
                yield prefix, vs, ws
    else:
        for prefix, vs in a.items():
            ws = b.get(prefix)
            if ws:
                yield prefix, vs, ws


def generate_cliques(store: CliqueStore, pattern: tuple) -> Iterator[tuple]:
    """Candidate size-k instances from the cross product of each shared prefix.

    Every output already has all pairwise edges except possibly between its
    last two vertices.
    """
    for prefix, vs, ws in join_groups(store, pattern):
        for v in vs:
            for w in ws:
                yield prefix + (v, w)
