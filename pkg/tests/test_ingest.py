import csv

import pytest
from hypothesis import given, settings, strategies as st

from colocgraph.ingest import IngestError, SyntheticConfig, generate_synthetic, load_csv, write_csv
from helpers import FIXTURE_A_ROWS, fixture_a


def write_rows(path, rows, header=("ID", "Primary Type", "Latitude", "Longitude")):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)
    return path


def test_load_fixture_a(tmp_path):
    ds = load_csv(write_rows(tmp_path / "a.csv", FIXTURE_A_ROWS))
    assert len(ds.features) == 4
    assert len(ds.instances) == 10
    assert [f.name for f in ds.features] == ["Murder", "Narcotics", "Theft", "Weapon Violation"]
    assert ds.skipped_rows == 0


def test_all_rows_missing_coordinates(tmp_path):
    p = write_rows(tmp_path / "x.csv", [("a", "X", "", ""), ("b", "Y", " ", "1.0")])
    with pytest.raises(IngestError, match="zero valid rows"):
        load_csv(p)


def test_duplicate_id(tmp_path):
    p = write_rows(tmp_path / "d.csv", [("M.1", "Murder", 1, 1), ("M.1", "Theft", 2, 2)])
    with pytest.raises(IngestError, match="M.1"):
        load_csv(p)


def test_skipped_plus_valid_equals_rows(tmp_path):
    rows = list(FIXTURE_A_ROWS) + [("bad1", "Theft", "abc", "1"), ("bad2", "Theft", "", "-87"),
                                   ("bad3", "Theft", "95", "0")]
    ds = load_csv(write_rows(tmp_path / "s.csv", rows))
    assert ds.skipped_rows == 3
    assert len(ds.instances) + ds.skipped_rows == len(rows)


def test_custom_columns(tmp_path):
    p = write_rows(tmp_path / "c.csv", [("1", "A", 0, 0)], header=("key", "kind", "y", "x"))
    ds = load_csv(p, {"id": "key", "feature": "kind", "lat": "y", "lng": "x"})
    assert ds.instances[0].id == "1"


def test_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_csv(tmp_path / "nope.csv")


def test_csv_round_trip(tmp_path):
    ds = fixture_a()
    write_csv(ds, tmp_path / "r.csv")
    back = load_csv(tmp_path / "r.csv")
    assert back.instances == ds.instances


def test_synthetic_deterministic(tmp_path):
    cfg = SyntheticConfig(feature_count=33, instance_count=30000, cluster_count=100, seed=7)
    write_csv(generate_synthetic(cfg), tmp_path / "a.csv")
    write_csv(generate_synthetic(cfg), tmp_path / "b.csv")
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()


def test_synthetic_minimal():
    ds = generate_synthetic(SyntheticConfig(feature_count=2, instance_count=2, cluster_count=1))
    assert ds.feature_counts() == [1, 1]


def test_synthetic_small_box():
    # a ~1 km square around Chicago
    cfg = SyntheticConfig(feature_count=5, instance_count=200, cluster_count=4, cluster_radius_km=0.05,
                          bbox=(41.88, 41.889, -87.63, -87.618), seed=1)
    ds = generate_synthetic(cfg)
    counts = ds.feature_counts()
    assert min(counts) >= 1
    assert sum(counts) == 200
    assert all(i.id.startswith(i.feature.name + ".") for i in ds.instances)


def test_synthetic_rejects_too_few_instances():
    with pytest.raises(ValueError):
        generate_synthetic(SyntheticConfig(feature_count=5, instance_count=3))


@settings(max_examples=40, deadline=None)
@given(
    f=st.integers(1, 12),
    extra=st.integers(0, 60),
    clusters=st.integers(1, 5),
    noise=st.floats(0, 1),
    seed=st.integers(0, 2**63 - 1),
)
def test_synthetic_always_valid(f, extra, clusters, noise, seed):
    cfg = SyntheticConfig(feature_count=f, instance_count=f + extra, cluster_count=clusters,
                          cluster_radius_km=0.1, noise_fraction=noise, seed=seed)
    ds = generate_synthetic(cfg)
    assert len(ds.features) == f
    assert len(ds.instances) == f + extra
    assert min(ds.feature_counts()) >= 1
    assert len({i.id for i in ds.instances}) == len(ds.instances)
