import json

import jsonschema
import pytest

from colocgraph import store
from colocgraph.cli import main
from colocgraph.schema import RESULT_SCHEMA
from helpers import FIXTURE_A_ROWS
from test_ingest import write_rows


@pytest.fixture
def fixture_csv(tmp_path):
    return write_rows(tmp_path / "a.csv", FIXTURE_A_ROWS)


@pytest.fixture
def graph_file(tmp_path, fixture_csv):
    out = tmp_path / "a.ngph"
    assert main(["build", "--input", str(fixture_csv), "--radius-km", "0.3", "--out", str(out)]) == 0
    return out


def build(tmp_path, csv_path, radius, name="g.ngph"):
    out = tmp_path / name
    assert main(["build", "--input", str(csv_path), "--radius-km", str(radius), "--out", str(out)]) == 0
    return out


def mine_json(tmp_path, graph, *extra, name="r.json"):
    out = tmp_path / name
    rc = main(["mine", "--graph", str(graph), "--out", str(out), *extra])
    assert rc == 0
    doc = json.loads(out.read_text())
    jsonschema.validate(doc, RESULT_SCHEMA)
    return doc


def test_build_reports_counts(tmp_path, fixture_csv, capsys):
    build(tmp_path, fixture_csv, 0.3)
    assert "vertices=10 edges=9" in capsys.readouterr().out
    manifest = json.loads((tmp_path / "g.ngph.manifest.json").read_text())
    assert manifest["output"]["edges"] == 9
    assert manifest["input_checksums"][str(fixture_csv)].startswith("sha256:")


def test_build_missing_input(tmp_path, capsys):
    rc = main(["build", "--input", str(tmp_path / "nope.csv"), "--radius-km", "0.3", "--out", str(tmp_path / "g")])
    assert rc == 2
    assert "input not found" in capsys.readouterr().err


def test_build_zero_radius(tmp_path, fixture_csv, capsys):
    build(tmp_path, fixture_csv, 0)
    assert "edges=0" in capsys.readouterr().out


def test_build_custom_columns(tmp_path, capsys):
    p = write_rows(tmp_path / "c.csv", FIXTURE_A_ROWS, header=("k", "kind", "y", "x"))
    rc = main(["build", "--input", str(p), "--radius-km", "0.3", "--out", str(tmp_path / "g"),
               "--id-col", "k", "--feature-col", "kind", "--lat-col", "y", "--lng-col", "x"])
    assert rc == 0
    assert "edges=9" in capsys.readouterr().out


def _update(tmp_path, graph, radius, capsys):
    out = tmp_path / "u.ngph"
    assert main(["update-radius", "--graph", str(graph), "--radius-km", str(radius), "--out", str(out)]) == 0
    return json.loads((tmp_path / "u.ngph.manifest.json").read_text())["output"], capsys.readouterr().out


@pytest.mark.parametrize("start,end,added,removed", [
    (0.1, 0.3, 0, 0),    # every fixture edge is already shorter than 0.1 km
    (0.02, 0.3, 9, 0),   # shortest fixture pair is ~33 m
    (0.3, 0.3, 0, 0),
    (0.3, 0.01, 0, 9),
])
def test_update_radius(tmp_path, fixture_csv, capsys, start, end, added, removed):
    g = build(tmp_path, fixture_csv, start)
    out, text = _update(tmp_path, g, end, capsys)
    assert (out["edges_added"], out["edges_removed"]) == (added, removed)
    assert f"+{added}/-{removed}" in text


def test_update_radius_bad_snapshot(tmp_path):
    bad = tmp_path / "bad.ngph"
    bad.write_bytes(b"")
    assert main(["update-radius", "--graph", str(bad), "--radius-km", "1", "--out", str(tmp_path / "o")]) == 2


def test_mine_extend_finds_mntw(tmp_path, graph_file):
    doc = mine_json(tmp_path, graph_file, "--algorithm", "extend", "--min-prev", "0.25", "--max-size", "4")
    mntw = [p for p in doc["patterns"] if p["size"] == 4]
    assert mntw[0]["features"] == ["Murder", "Narcotics", "Theft", "Weapon Violation"]
    assert mntw[0]["participation_index"] == 0.25
    assert doc["params"] == {"radius_km": 0.3, "min_prev": 0.25, "max_size": 4, "algorithm": "extend"}


def test_mine_threshold_above_one(tmp_path, graph_file):
    doc = mine_json(tmp_path, graph_file, "--algorithm", "enum-g", "--min-prev", "1.01", "--max-size", "4")
    assert [p["size"] for p in doc["patterns"]] == [1, 1, 1, 1]


def test_mine_all_algorithms_identical(tmp_path, graph_file):
    arrays = []
    for alg in ("enum-g", "enum-k", "extend", "oracle"):
        doc = mine_json(tmp_path, graph_file, "--algorithm", alg, "--min-prev", "0.5", "--max-size", "4",
                        name=f"{alg}.json")
        arrays.append(json.dumps(doc["patterns"], sort_keys=True))
    assert len(set(arrays)) == 1
    keys = [(p["size"], p["features"]) for p in json.loads(arrays[0])]
    assert keys == sorted(keys)


def test_mine_emit_instances(tmp_path, graph_file):
    doc = mine_json(tmp_path, graph_file, "--algorithm", "enum-k", "--min-prev", "0.25", "--max-size", "4",
                    "--emit-instances", "--threads", "4")
    by_feats = {tuple(p["features"]): p for p in doc["patterns"]}
    assert by_feats[("Murder", "Narcotics", "Theft", "Weapon Violation")]["instances"] == [["M.1", "N.1", "T.1", "W.1"]]
    assert by_feats[("Murder", "Narcotics")]["instances"] == [["M.1", "N.1"], ["M.2", "N.2"]]


def test_mine_oracle_cap(tmp_path, graph_file, capsys):
    rc = main(["mine", "--graph", str(graph_file), "--algorithm", "oracle", "--min-prev", "0.5",
               "--max-size", "3", "--oracle-cap", "5", "--out", str(tmp_path / "o.json")])
    assert rc == 2
    assert "cap 5" in capsys.readouterr().err


def test_mine_unknown_algorithm(tmp_path, graph_file):
    with pytest.raises(SystemExit) as e:
        main(["mine", "--graph", str(graph_file), "--algorithm", "magic", "--min-prev", "0.5",
              "--max-size", "3", "--out", str(tmp_path / "o.json")])
    assert e.value.code == 2


def test_gen_deterministic(tmp_path):
    for name in ("a.csv", "b.csv"):
        assert main(["gen", "--features", "6", "--instances", "500", "--clusters", "5", "--seed", "7",
                     "--out", str(tmp_path / name)]) == 0
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()


def test_gen_default_scale(tmp_path):
    out = tmp_path / "big.csv"
    assert main(["gen", "--features", "33", "--instances", "30000", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 30001


def test_gen_too_few_instances(tmp_path):
    assert main(["gen", "--features", "10", "--instances", "5", "--out", str(tmp_path / "x.csv")]) == 2


def test_bench_fixture(tmp_path, graph_file):
    out = tmp_path / "bench.json"
    assert main(["bench", "--graph", str(graph_file), "--min-prev", "0.25", "--max-size", "4", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["results_equal"] is True
    assert set(doc["algorithms"]) == {"enum-g", "enum-k", "extend"}
    assert all(a["prevalent_patterns"] == 15 for a in doc["algorithms"].values())


def test_bench_synthetic_smoke(tmp_path):
    csv_path = tmp_path / "s.csv"
    assert main(["gen", "--features", "33", "--instances", "10000", "--seed", "3", "--out", str(csv_path)]) == 0
    # 0.2 km keeps the run short while still reaching size-4 candidates
    g = build(tmp_path, csv_path, 0.2)
    out = tmp_path / "bench.json"
    assert main(["bench", "--graph", str(g), "--min-prev", "0.1", "--max-size", "4", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert len(doc["algorithms"]) == 3
    for entry in doc["algorithms"].values():
        assert sorted(entry["per_size_seconds"]) == ["2", "3", "4"]


def test_bench_detects_mismatch(tmp_path, graph_file, monkeypatch, capsys):
    real = store.validate_clique
    flipped = []

    def faulty(*args):
        verdict = real(*args)
        if verdict and not flipped:
            flipped.append(args)
            return False
        return verdict

    monkeypatch.setattr(store, "validate_clique", faulty)
    rc = main(["bench", "--graph", str(graph_file), "--min-prev", "0.25", "--max-size", "4",
               "--out", str(tmp_path / "b.json")])
    assert rc == 3
    assert flipped
    assert "mismatch" in capsys.readouterr().err
