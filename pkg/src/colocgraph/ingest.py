"""Dataset loading from CSV and synthetic dataset generation."""

from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .geo import EARTH_RADIUS_KM, Feature, FeatureInstance, GeoPoint, feature_order

log = logging.getLogger(__name__)

DEFAULT_MAPPING = {
    "id": "ID",
    "feature": "Primary Type",
    "lat": "Latitude",
    "lng": "Longitude",
}

KM_PER_DEGREE = EARTH_RADIUS_KM * math.pi / 180.0


class IngestError(ValueError):
    pass


@dataclass
class Dataset:
    features: list[Feature]
    instances: list[FeatureInstance]
    skipped_rows: int = 0

    def __post_init__(self):
        names = {f.name for f in self.features}
        if len(names) != len(self.features):
            raise IngestError("duplicate feature names")
        if sorted(f.ordinal for f in self.features) != list(range(len(self.features))):
            raise IngestError("feature ordinals must be dense 0..F-1")
        ids = set()
        for inst in self.instances:
            if inst.id in ids:
                raise IngestError(f"duplicate instance id: {inst.id!r}")
            ids.add(inst.id)
            if inst.feature.name not in names:
                raise IngestError(f"instance {inst.id!r} has unknown feature {inst.feature.name!r}")

    def feature_counts(self) -> list[int]:
        counts = [0] * len(self.features)
        for inst in self.instances:
            counts[inst.feature.ordinal] += 1
        return counts


def make_dataset(rows) -> Dataset:
    """Build a dataset from ``(id, feature_name, lat, lng)`` tuples."""
    rows = list(rows)
    if not rows:
        raise IngestError("zero valid rows")
    features = feature_order({r[1] for r in rows})
    by_name = {f.name: f for f in features}
    seen = set()
    instances = []
    for iid, fname, lat, lng in rows:
        if iid in seen:
            raise IngestError(f"duplicate instance id: {iid!r}")
        seen.add(iid)
        instances.append(FeatureInstance(iid, by_name[fname], GeoPoint(lat, lng)))
    return Dataset(features, instances)


def _parse_coord(text):
    text = (text or "").strip()
    if not text:
        return None
    try:
        value = float(text)
    except ValueError:
        return None
    return value if math.isfinite(value) else None


def load_csv(path, mapping: dict | None = None) -> Dataset:
    """Read a point-event CSV (Chicago open-data layout by default).

    Rows with missing, unparseable or out-of-range coordinates, or a blank
    id/feature, are skipped and counted in ``Dataset.skipped_rows``.
    """
    cols = dict(DEFAULT_MAPPING)
    if mapping:
        cols.update({k: v for k, v in mapping.items() if v})
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"input not found: {path}")

    rows = []
    skipped = 0
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        missing = [c for c in cols.values() if c not in (reader.fieldnames or [])]
        if missing:
            raise IngestError(f"missing columns: {', '.join(missing)}")
        for rec in reader:
            iid = (rec[cols["id"]] or "").strip()
            fname = (rec[cols["feature"]] or "").strip()
            lat = _parse_coord(rec[cols["lat"]])
            lng = _parse_coord(rec[cols["lng"]])
            if not iid or not fname or lat is None or lng is None or abs(lat) > 90 or abs(lng) > 180:
                skipped += 1
                continue
            rows.append((iid, fname, lat, lng))

    if skipped:
        log.warning("skipped %d rows without usable coordinates in %s", skipped, path)
    if not rows:
        raise IngestError("zero valid rows")
    ds = make_dataset(rows)
    ds.skipped_rows = skipped
    return ds


def write_csv(dataset: Dataset, path, mapping: dict | None = None) -> None:
    cols = dict(DEFAULT_MAPPING)
    if mapping:
        cols.update({k: v for k, v in mapping.items() if v})
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow([cols["id"], cols["feature"], cols["lat"], cols["lng"]])
        for inst in dataset.instances:
            w.writerow([inst.id, inst.feature.name, repr(inst.location.lat), repr(inst.location.lng)])


@dataclass
class SyntheticConfig:
    feature_count: int = 33
    instance_count: int = 30000
    cluster_count: int = 100
    cluster_radius_km: float = 0.2
    # (lat_min, lat_max, lng_min, lng_max); defaults roughly cover Chicago
    bbox: tuple = (41.64, 42.02, -87.94, -87.52)
    noise_fraction: float = 0.2
    seed: int = 0
    max_retries: int = field(default=16, repr=False)

    def validate(self):
        if self.feature_count < 1 or self.instance_count < 1 or self.cluster_count < 1:
            raise ValueError("feature_count, instance_count and cluster_count must be positive")
        if not self.cluster_radius_km > 0:
            raise ValueError("cluster_radius_km must be positive")
        lat0, lat1, lng0, lng1 = self.bbox
        if not (-90 <= lat0 < lat1 <= 90 and -180 <= lng0 < lng1 <= 180):
            raise ValueError(f"degenerate or invalid bbox: {self.bbox}")
        if not 0.0 <= self.noise_fraction <= 1.0:
            raise ValueError("noise_fraction must be in [0, 1]")
        if self.instance_count < self.feature_count:
            raise ValueError("instance_count must be >= feature_count so every feature has an instance")


def feature_names(n: int) -> list[str]:
    width = len(str(n - 1))
    return [f"F{i:0{width}d}" for i in range(n)]


def generate_synthetic(cfg: SyntheticConfig) -> Dataset:
    """Clustered point events with uniform background noise, deterministic per seed."""
    cfg.validate()
    rng = np.random.default_rng(cfg.seed)
    lat0, lat1, lng0, lng1 = cfg.bbox
    n = cfg.instance_count
    n_noise = int(round(cfg.noise_fraction * n))
    n_clustered = n - n_noise

    centers = np.column_stack([rng.uniform(lat0, lat1, cfg.cluster_count),
                               rng.uniform(lng0, lng1, cfg.cluster_count)])
    which = rng.integers(0, cfg.cluster_count, n_clustered)
    sigma_lat = cfg.cluster_radius_km / KM_PER_DEGREE
    cos_lat = np.maximum(np.cos(np.radians(centers[which, 0])), 1e-6)
    lat = centers[which, 0] + rng.normal(0.0, sigma_lat, n_clustered)
    lng = centers[which, 1] + rng.normal(0.0, 1.0, n_clustered) * sigma_lat / cos_lat
    lat = np.concatenate([lat, rng.uniform(lat0, lat1, n_noise)])
    lng = np.concatenate([lng, rng.uniform(lng0, lng1, n_noise)])
    lat = np.clip(lat, -90.0, 90.0)
    lng = np.clip(lng, -180.0, 180.0)

    feats = rng.integers(0, cfg.feature_count, n)
    for _ in range(cfg.max_retries):
        if len(np.unique(feats)) == cfg.feature_count:
            break
        feats = rng.integers(0, cfg.feature_count, n)
    else:
        # fall back to forcing coverage: one distinct slot per feature
        slots = rng.permutation(n)[: cfg.feature_count]
        feats[slots] = np.arange(cfg.feature_count)

    names = feature_names(cfg.feature_count)
    counters = [0] * cfg.feature_count
    rows = []
    for i in range(n):
        f = int(feats[i])
        counters[f] += 1
        rows.append((f"{names[f]}.{counters[f]}", names[f], float(lat[i]), float(lng[i])))
    return make_dataset(rows)
