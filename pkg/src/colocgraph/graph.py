"""Neighborhood graph: vertices are feature instances, edges join neighbors of
distinct features, labeled by their (lo, hi) feature ordinals and carrying the
pair distance.
"""

from __future__ import annotations

import math
import struct
import zlib
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterator

from .geo import EARTH_RADIUS_KM, Feature, FeatureInstance, GeoPoint, haversine_km
from .ingest import Dataset

# relative slack on grid cell size so boundary pairs are never missed
_CELL_MARGIN = 1.0 + 1e-9
_MIN_CELL_DEG = 1e-9


@dataclass(frozen=True)
class Vertex:
    vertex_id: int
    instance_id: str
    feature: int
    location: GeoPoint


@dataclass(frozen=True)
class EdgeLabel:
    lo: int
    hi: int

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError(f"edge label must satisfy lo < hi, got {self.lo}:{self.hi}")


@dataclass(frozen=True)
class Edge:
    u: int
    v: int
    label: EdgeLabel
    distance_km: float


class SpatialGrid:
    """Uniform lat/lng grid whose cells span at least ``radius_km`` everywhere
    in the indexed latitude band, so a radius query only scans 3x3 cells.
    """

    def __init__(self, lats, lngs, radius_km: float):
        self.radius_km = radius_km
        ang = radius_km / EARTH_RADIUS_KM
        self.dlat = max(math.degrees(ang) * _CELL_MARGIN, _MIN_CELL_DEG)
        max_abs_lat = max((abs(x) for x in lats), default=0.0)
        cos_max = math.cos(math.radians(max_abs_lat))
        s = math.sin(min(ang, math.pi / 2))
        if s >= cos_max:
            # neighborhood can wrap over a pole: one column covers everything
            self.ncols = 1
        else:
            dlng = math.degrees(math.asin(s / cos_max)) * _CELL_MARGIN
            self.ncols = max(1, int(360.0 // max(dlng, _MIN_CELL_DEG)))
        self.dlng = 360.0 / self.ncols
        self.cells: dict[tuple[int, int], list[int]] = defaultdict(list)
        for i, (la, ln) in enumerate(zip(lats, lngs)):
            self.cells[self.cell_of(la, ln)].append(i)

    def cell_of(self, lat: float, lng: float) -> tuple[int, int]:
        return math.floor(lat / self.dlat), math.floor((lng + 180.0) / self.dlng) % self.ncols

    def candidates(self, lat: float, lng: float) -> Iterator[int]:
        r, c = self.cell_of(lat, lng)
        if self.ncols <= 3:
            cols = range(self.ncols)
        else:
            cols = {(c - 1) % self.ncols, c, (c + 1) % self.ncols}
        cells = self.cells
        for dr in (-1, 0, 1):
            for cc in cols:
                cell = cells.get((r + dr, cc))
                if cell:
                    yield from cell


class NeighborhoodGraph:
    def __init__(self, features: list[Feature], instance_ids, feature_of, lats, lngs, radius_km: float):
        self.features = list(features)
        self.instance_ids = list(instance_ids)
        self.feature_of = list(feature_of)
        self.lats = list(lats)
        self.lngs = list(lngs)
        self.radius_km = float(radius_km)
        n = len(self.instance_ids)
        if len(set(self.instance_ids)) != n:
            raise ValueError("instance ids must be unique")
        # adjacency[u][f] = neighbors of u having feature f
        self.adjacency: list[dict[int, set[int]]] = [{} for _ in range(n)]
        # (lo_vertex, hi_vertex) -> distance, lo_vertex has the lower feature ordinal
        self.edges: dict[tuple[int, int], float] = {}
        self.feature_index: list[list[int]] = [[] for _ in self.features]
        for v, f in enumerate(self.feature_of):
            self.feature_index[f].append(v)
        self.feature_counts = [len(ix) for ix in self.feature_index]
        self.grid: SpatialGrid | None = None
        self._vertex_by_instance = {iid: v for v, iid in enumerate(self.instance_ids)}

    # -- construction --------------------------------------------------

    @classmethod
    def empty_from_dataset(cls, dataset: Dataset, radius_km: float) -> "NeighborhoodGraph":
        insts = dataset.instances
        return cls(
            dataset.features,
            [i.id for i in insts],
            [i.feature.ordinal for i in insts],
            [i.location.lat for i in insts],
            [i.location.lng for i in insts],
            radius_km,
        )

    def __len__(self):
        return len(self.instance_ids)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def vertex(self, v: int) -> Vertex:
        return Vertex(v, self.instance_ids[v], self.feature_of[v], GeoPoint(self.lats[v], self.lngs[v]))

    def vertex_id(self, instance_id: str) -> int:
        return self._vertex_by_instance[instance_id]

    def feature_id(self, name: str) -> int:
        for f in self.features:
            if f.name == name:
                return f.ordinal
        raise KeyError(name)

    def to_dataset(self) -> Dataset:
        insts = [
            FeatureInstance(self.instance_ids[v], self.features[self.feature_of[v]], GeoPoint(self.lats[v], self.lngs[v]))
            for v in range(len(self))
        ]
        return Dataset(list(self.features), insts)

    def build_grid(self, radius_km: float | None = None) -> SpatialGrid:
        self.grid = SpatialGrid(self.lats, self.lngs, self.radius_km if radius_km is None else radius_km)
        return self.grid

    def search_neighbors(self, v: int, radius_km: float | None = None) -> set[int]:
        """Vertices within the radius of ``v`` that have a different feature."""
        radius = self.radius_km if radius_km is None else radius_km
        if self.grid is None or self.grid.radius_km < radius:
            self.build_grid(radius)
        lat, lng, f = self.lats[v], self.lngs[v], self.feature_of[v]
        lats, lngs, feats = self.lats, self.lngs, self.feature_of
        out = set()
        for w in self.grid.candidates(lat, lng):
            if feats[w] != f and haversine_km(lat, lng, lats[w], lngs[w]) <= radius:
                out.add(w)
        return out

    def add_edge(self, u: int, v: int, distance_km: float) -> bool:
        fu, fv = self.feature_of[u], self.feature_of[v]
        if fu == fv:
            raise ValueError("edges between instances of the same feature are not allowed")
        if fu > fv:
            u, v, fu, fv = v, u, fv, fu
        if (u, v) in self.edges:
            return False
        self.edges[(u, v)] = distance_km
        self.adjacency[u].setdefault(fv, set()).add(v)
        self.adjacency[v].setdefault(fu, set()).add(u)
        return True

    def remove_edge(self, u: int, v: int) -> None:
        fu, fv = self.feature_of[u], self.feature_of[v]
        if fu > fv:
            u, v, fu, fv = v, u, fv, fu
        del self.edges[(u, v)]
        for a, b, fb in ((u, v, fv), (v, u, fu)):
            nbrs = self.adjacency[a][fb]
            nbrs.discard(b)
            if not nbrs:
                del self.adjacency[a][fb]

    def _connect(self, lo_radius: float | None, hi_radius: float) -> int:
        """Insert every missing edge with distance in (lo_radius, hi_radius]."""
        grid = self.build_grid(hi_radius)
        lats, lngs, feats = self.lats, self.lngs, self.feature_of
        added = 0
        for v in range(len(self)):
            lat, lng, f = lats[v], lngs[v], feats[v]
            for w in grid.candidates(lat, lng):
                # each pair is created once, from its lower-ordinal endpoint
                if feats[w] <= f:
                    continue
                d = haversine_km(lat, lng, lats[w], lngs[w])
                if d <= hi_radius and (lo_radius is None or d > lo_radius):
                    if self.add_edge(v, w, d):
                        added += 1
        return added

    # -- queries --------------------------------------------------------

    def lookup_edge(self, u: int, v: int) -> bool:
        nbrs = self.adjacency[u].get(self.feature_of[v])
        return nbrs is not None and v in nbrs

    def neighbors(self, u: int, feature: int) -> set[int]:
        return self.adjacency[u].get(feature, _EMPTY)

    def edge_list(self) -> list[Edge]:
        feats = self.feature_of
        return [Edge(u, v, EdgeLabel(feats[u], feats[v]), d) for (u, v), d in sorted(self.edges.items())]

    def check_invariants(self) -> None:
        """Full scan of symmetry, labeling and distance invariants."""
        feats = self.feature_of
        half = 0
        for u, by_f in enumerate(self.adjacency):
            for f, nbrs in by_f.items():
                assert nbrs, "empty adjacency bucket"
                for v in nbrs:
                    assert feats[v] == f and f != feats[u]
                    assert u in self.adjacency[v].get(feats[u], ())
                    key = (u, v) if feats[u] < feats[v] else (v, u)
                    assert key in self.edges
                    half += 1
        assert half == 2 * len(self.edges)
        for (u, v), d in self.edges.items():
            assert feats[u] < feats[v]
            assert d <= self.radius_km
        for f, ix in enumerate(self.feature_index):
            assert self.feature_counts[f] == len(ix)


_EMPTY: frozenset = frozenset()


def build_graph(dataset: Dataset, radius_km: float) -> NeighborhoodGraph:
    if radius_km < 0 or math.isnan(radius_km):
        raise ValueError("radius_km must be non-negative")
    g = NeighborhoodGraph.empty_from_dataset(dataset, radius_km)
    g._connect(None, radius_km)
    return g


def update_radius(g: NeighborhoodGraph, new_radius_km: float) -> tuple[int, int]:
    """Move ``g`` to a new distance threshold in place.

    Growing adds only pairs in (old, new]; shrinking drops edges using their
    stored distance without any spatial search. Returns (added, removed).
    """
    if new_radius_km < 0 or math.isnan(new_radius_km):
        raise ValueError("radius must be non-negative")
    old = g.radius_km
    added = removed = 0
    if new_radius_km > old:
        g.radius_km = new_radius_km
        added = g._connect(old, new_radius_km)
    elif new_radius_km < old:
        doomed = [uv for uv, d in g.edges.items() if d > new_radius_km]
        for u, v in doomed:
            g.remove_edge(u, v)
        removed = len(doomed)
        g.radius_km = new_radius_km
        g.grid = None
    return added, removed


def get_cycles(g: NeighborhoodGraph, pattern) -> Iterator[tuple]:
    """Stream feature-ordered cycles (v1..vk) for a canonical pattern.

    Consecutive vertices are joined by edges and vk closes back to v1. For
    k=2 this is just the edge list of the label.
    """
    k = len(pattern)
    if k < 2:
        raise ValueError("cycles need a pattern of size >= 2")
    adj = g.adjacency
    f0, f1, flast = pattern[0], pattern[1], pattern[-1]
    if k == 2:
        for u in g.feature_index[f0]:
            for v in adj[u].get(f1, _EMPTY):
                yield (u, v)
        return
    inner = pattern[1:-1]

    def walk(path, depth, closing):
        nxt = adj[path[-1]].get(inner[depth], _EMPTY) if depth < len(inner) else None
        if nxt is None:
            # last step must land on a vertex adjacent to the start
            last = adj[path[-1]].get(flast)
            if last:
                for w in (last & closing if len(last) > len(closing) else closing & last):
                    yield path + (w,)
            return
        for w in nxt:
            yield from walk(path + (w,), depth + 1, closing)

    for start in g.feature_index[f0]:
        closing = adj[start].get(flast)
        if not closing or f1 not in adj[start]:
            continue
        yield from walk((start,), 0, closing)


def is_clique(g: NeighborhoodGraph, row) -> bool:
    """Check the chords of a cycle; sizes 2 and 3 are cliques by construction."""
    k = len(row)
    if k <= 3:
        return True
    for i in range(k - 2):
        for j in range(i + 2, k):
            if i == 0 and j == k - 1:
                continue
            if not g.lookup_edge(row[i], row[j]):
                return False
    return True


# -- snapshot format ----------------------------------------------------

MAGIC = b"NGPH"
FORMAT_VERSION = 1


class GraphFormatError(ValueError):
    pass


def _pack_str(s: str) -> bytes:
    b = s.encode("utf-8")
    return struct.pack("<I", len(b)) + b


def save_graph(g: NeighborhoodGraph) -> bytes:
    parts = [MAGIC, struct.pack("<Hd", FORMAT_VERSION, g.radius_km),
             struct.pack("<II", len(g), len(g.features))]
    for f in g.features:
        parts.append(_pack_str(f.name))
    for v in range(len(g)):
        parts.append(struct.pack("<I", v))
        parts.append(_pack_str(g.instance_ids[v]))
        parts.append(struct.pack("<Hdd", g.feature_of[v], g.lats[v], g.lngs[v]))
    parts.append(struct.pack("<Q", len(g.edges)))
    for (u, v), d in sorted(g.edges.items()):
        parts.append(struct.pack("<IId", u, v, d))
    body = b"".join(parts)
    return body + struct.pack("<I", zlib.crc32(body))


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.data):
            raise GraphFormatError("truncated snapshot")
        out = self.data[self.pos:self.pos + n]
        self.pos += n
        return out

    def unpack(self, fmt: str):
        return struct.unpack(fmt, self.take(struct.calcsize(fmt)))

    def string(self) -> str:
        (n,) = self.unpack("<I")
        try:
            return self.take(n).decode("utf-8")
        except UnicodeDecodeError as e:
            raise GraphFormatError(f"corrupt string in snapshot: {e}") from None


def load_graph(data: bytes) -> NeighborhoodGraph:
    r = _Reader(data)
    if r.take(4) != MAGIC:
        raise GraphFormatError("bad magic: not a graph snapshot")
    (version,) = r.unpack("<H")
    if version != FORMAT_VERSION:
        raise GraphFormatError(f"version mismatch: snapshot v{version}, expected v{FORMAT_VERSION}")
    if len(data) < 4 + 2 + 4:
        raise GraphFormatError("truncated snapshot")
    (crc,) = struct.unpack("<I", data[-4:])
    if zlib.crc32(data[:-4]) != crc:
        raise GraphFormatError("checksum failure")
    r.data = data[:-4]
    (radius,) = r.unpack("<d")
    nv, nf = r.unpack("<II")
    features = [Feature(r.string(), i) for i in range(nf)]
    ids, feats, lats, lngs = [], [], [], []
    for expect in range(nv):
        (vid,) = r.unpack("<I")
        if vid != expect:
            raise GraphFormatError(f"vertex ids not dense at {expect}")
        ids.append(r.string())
        f, la, ln = r.unpack("<Hdd")
        if f >= nf:
            raise GraphFormatError(f"vertex {vid} has unknown feature ordinal {f}")
        feats.append(f)
        lats.append(la)
        lngs.append(ln)
    g = NeighborhoodGraph(features, ids, feats, lats, lngs, radius)
    (ne,) = r.unpack("<Q")
    for _ in range(ne):
        u, v, d = r.unpack("<IId")
        if u >= nv or v >= nv or feats[u] >= feats[v]:
            raise GraphFormatError(f"invalid edge record ({u}, {v})")
        g.add_edge(u, v, d)
    if r.pos != len(r.data):
        raise GraphFormatError("trailing bytes after edge records")
    return g
