"""Command-line front end.

Exit codes: 0 ok, 2 input/usage error, 3 internal consistency failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import sys
import time
from pathlib import Path

from . import __version__
from .graph import GraphFormatError, NeighborhoodGraph, build_graph, load_graph, save_graph, update_radius
from .ingest import IngestError, SyntheticConfig, generate_synthetic, load_csv, write_csv
from .miner import MiningParams, MiningResult, mine
from .oracle import DEFAULT_INSTANCE_CAP, OracleRefused, oracle_mine

log = logging.getLogger("colocgraph")

EXIT_OK, EXIT_INPUT, EXIT_INCONSISTENT = 0, 2, 3


class CliError(Exception):
    def __init__(self, message, code=EXIT_INPUT):
        super().__init__(message)
        self.code = code


def _sha256(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def _manifest(command, args, inputs, phases):
    params = {k: v for k, v in vars(args).items() if k not in ("func", "command")}
    return {
        "command": command,
        "parameters": {k: (str(v) if isinstance(v, Path) else v) for k, v in params.items()},
        "input_checksums": {str(p): "sha256:" + _sha256(p) for p in inputs},
        "tool_version": __version__,
        "phase_seconds": phases,
    }


def _write_json(path, obj):
    Path(path).write_text(json.dumps(obj, indent=2, sort_keys=False) + "\n", encoding="utf-8")


def _read_graph(path) -> NeighborhoodGraph:
    path = Path(path)
    if not path.exists():
        raise CliError(f"input not found: {path}")
    try:
        return load_graph(path.read_bytes())
    except GraphFormatError as e:
        raise CliError(f"cannot load graph {path}: {e}") from None


def patterns_json(g: NeighborhoodGraph, result: MiningResult, with_instances: bool = False) -> list[dict]:
    names = [f.name for f in g.features]
    out = []
    for rep in sorted(result.reports(), key=lambda r: (len(r.pattern), r.pattern)):
        entry = {
            "features": [names[f] for f in rep.pattern],
            "size": len(rep.pattern),
            "participation_index": rep.participation_index,
            "participation_ratios": {names[f]: pr for f, pr in zip(rep.pattern, rep.participation_ratios)},
            "row_instance_count": rep.row_instance_count,
        }
        if with_instances and len(rep.pattern) > 1:
            rows = result.instances.get(rep.pattern, [])
            entry["instances"] = [[g.instance_ids[v] for v in row] for row in rows]
        out.append(entry)
    return out


def timings_json(result: MiningResult) -> dict:
    return {
        "per_size_seconds": {str(k): v for k, v in sorted(result.per_size_seconds.items())},
        "total_seconds": result.total_seconds,
    }


def run_miner(g: NeighborhoodGraph, params: MiningParams, oracle_cap=DEFAULT_INSTANCE_CAP, oracle_force=False):
    if params.algorithm == "oracle":
        return oracle_mine(g.to_dataset(), g.radius_km, params.min_prev, params.max_size,
                           cap=oracle_cap, allow_large=oracle_force, emit_instances=params.emit_instances)
    return mine(g, params)


# -- commands ------------------------------------------------------------

def cmd_build(args):
    t0 = time.perf_counter()
    mapping = {"id": args.id_col, "feature": args.feature_col, "lat": args.lat_col, "lng": args.lng_col}
    try:
        ds = load_csv(args.input, mapping)
    except FileNotFoundError:
        raise CliError(f"input not found: {args.input}") from None
    except IngestError as e:
        raise CliError(f"ingest error: {e}") from None
    t1 = time.perf_counter()
    try:
        g = build_graph(ds, args.radius_km)
    except ValueError as e:
        raise CliError(str(e)) from None
    t2 = time.perf_counter()
    Path(args.out).write_bytes(save_graph(g))
    t3 = time.perf_counter()
    manifest = _manifest("build", args, [args.input], {"load": t1 - t0, "build": t2 - t1, "write": t3 - t2})
    manifest["output"] = {"vertices": len(g), "edges": g.edge_count, "skipped_rows": ds.skipped_rows}
    _write_json(str(args.out) + ".manifest.json", manifest)
    print(f"vertices={len(g)} edges={g.edge_count} skipped_rows={ds.skipped_rows}")


def cmd_update_radius(args):
    g = _read_graph(args.graph)
    if args.radius_km < 0:
        raise CliError("radius must be non-negative")
    before = g.radius_km
    t0 = time.perf_counter()
    added, removed = update_radius(g, args.radius_km)
    elapsed = time.perf_counter() - t0
    Path(args.out).write_bytes(save_graph(g))
    manifest = _manifest("update-radius", args, [args.graph], {"update": elapsed})
    manifest["output"] = {"from_radius_km": before, "to_radius_km": args.radius_km,
                          "edges_added": added, "edges_removed": removed, "edges": g.edge_count}
    _write_json(str(args.out) + ".manifest.json", manifest)
    print(f"radius {before:g} -> {args.radius_km:g} km: +{added}/-{removed} edges "
          f"(now {g.edge_count}) in {elapsed:.3f}s")


def cmd_mine(args):
    t0 = time.perf_counter()
    g = _read_graph(args.graph)
    t1 = time.perf_counter()
    params = MiningParams(args.min_prev, args.max_size, args.algorithm, args.emit_instances, args.threads)
    try:
        result = run_miner(g, params, args.oracle_cap, args.oracle_force)
    except OracleRefused as e:
        raise CliError(str(e)) from None
    t2 = time.perf_counter()
    doc = {
        "manifest": _manifest("mine", args, [args.graph], {"load": t1 - t0, "mine": t2 - t1}),
        "params": {"radius_km": g.radius_km, "min_prev": args.min_prev, "max_size": args.max_size,
                   "algorithm": params.algorithm.replace("_", "-")},
        "patterns": patterns_json(g, result, args.emit_instances),
        "timings": timings_json(result),
    }
    _write_json(args.out, doc)
    print(f"{len(doc['patterns'])} prevalent patterns written to {args.out}")


def cmd_gen(args):
    cfg = SyntheticConfig(
        feature_count=args.features, instance_count=args.instances, cluster_count=args.clusters,
        cluster_radius_km=args.cluster_radius_km, bbox=tuple(args.bbox), noise_fraction=args.noise,
        seed=args.seed,
    )
    try:
        ds = generate_synthetic(cfg)
    except ValueError as e:
        raise CliError(str(e)) from None
    t0 = time.perf_counter()
    write_csv(ds, args.out)
    manifest = _manifest("gen", args, [], {"write": time.perf_counter() - t0})
    manifest["output"] = {"instances": len(ds.instances), "features": len(ds.features)}
    _write_json(str(args.out) + ".manifest.json", manifest)
    print(f"wrote {len(ds.instances)} instances over {len(ds.features)} features to {args.out}")


def _diff_summary(reference: dict, other: dict, limit=10) -> list[str]:
    lines = []
    for p in sorted(set(reference) | set(other)):
        a, b = reference.get(p), other.get(p)
        if a != b:
            lines.append(f"{p}: {a} vs {b}")
    return lines[:limit]


def cmd_bench(args):
    g = _read_graph(args.graph)
    table = {}
    baseline = None
    mismatches = []
    for alg in ("extend", "enum_g", "enum_k"):
        params = MiningParams(args.min_prev, args.max_size, alg, False, args.threads)
        res = mine(g, params)
        summary = {r.pattern: (r.participation_index, r.row_instance_count) for r in res.reports()}
        if baseline is None:
            baseline = (alg, summary)
        elif summary != baseline[1]:
            mismatches.append((alg, _diff_summary(baseline[1], summary)))
        table[alg.replace("_", "-")] = {**timings_json(res), "prevalent_patterns": len(summary)}
    if mismatches:
        for alg, diff in mismatches:
            print(f"result mismatch: {baseline[0]} vs {alg}", file=sys.stderr)
            for line in diff:
                print("  " + line, file=sys.stderr)
        raise CliError("miners disagree", EXIT_INCONSISTENT)
    ordering = sorted(table, key=lambda a: table[a]["total_seconds"])
    doc = {
        "manifest": _manifest("bench", args, [args.graph], {}),
        "params": {"radius_km": g.radius_km, "min_prev": args.min_prev, "max_size": args.max_size,
                   "threads": args.threads, "vertices": len(g), "edges": g.edge_count},
        "algorithms": table,
        "ordering_fastest_first": ordering,
        "results_equal": True,
    }
    _write_json(args.out, doc)
    for alg in ordering:
        print(f"{alg:8s} {table[alg]['total_seconds']:.3f}s")


# -- parser ----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="colocgraph", description="Co-location pattern mining on a neighborhood graph")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="load a CSV and build a neighborhood graph snapshot")
    b.add_argument("--input", required=True, type=Path)
    b.add_argument("--radius-km", required=True, type=float)
    b.add_argument("--out", required=True, type=Path)
    b.add_argument("--id-col")
    b.add_argument("--feature-col")
    b.add_argument("--lat-col")
    b.add_argument("--lng-col")
    b.set_defaults(func=cmd_build)

    u = sub.add_parser("update-radius", help="move a graph snapshot to a new distance threshold")
    u.add_argument("--graph", required=True, type=Path)
    u.add_argument("--radius-km", required=True, type=float)
    u.add_argument("--out", required=True, type=Path)
    u.set_defaults(func=cmd_update_radius)

    m = sub.add_parser("mine", help="mine prevalent co-location patterns")
    m.add_argument("--graph", required=True, type=Path)
    m.add_argument("--algorithm", required=True, choices=["enum-g", "enum-k", "extend", "oracle"])
    m.add_argument("--min-prev", required=True, type=float)
    m.add_argument("--max-size", required=True, type=int)
    m.add_argument("--threads", type=int, default=1)
    m.add_argument("--emit-instances", action="store_true")
    m.add_argument("--oracle-cap", type=int, default=DEFAULT_INSTANCE_CAP)
    m.add_argument("--oracle-force", action="store_true", help="run the oracle above its instance cap")
    m.add_argument("--out", required=True, type=Path)
    m.set_defaults(func=cmd_mine)

    gsub = sub.add_parser("gen", help="generate a synthetic dataset CSV")
    gsub.add_argument("--features", type=int, default=33)
    gsub.add_argument("--instances", type=int, default=30000)
    gsub.add_argument("--clusters", type=int, default=100)
    gsub.add_argument("--cluster-radius-km", type=float, default=0.2)
    gsub.add_argument("--bbox", type=float, nargs=4, default=list(SyntheticConfig.bbox),
                      metavar=("LAT_MIN", "LAT_MAX", "LNG_MIN", "LNG_MAX"))
    gsub.add_argument("--noise", type=float, default=0.2)
    gsub.add_argument("--seed", type=int, default=0)
    gsub.add_argument("--out", required=True, type=Path)
    gsub.set_defaults(func=cmd_gen)

    bn = sub.add_parser("bench", help="time all three miners on one graph and check they agree")
    bn.add_argument("--graph", required=True, type=Path)
    bn.add_argument("--min-prev", type=float, default=0.1)
    bn.add_argument("--max-size", type=int, default=4)
    bn.add_argument("--threads", type=int, default=1)
    bn.add_argument("--out", required=True, type=Path)
    bn.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        args.func(args)
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.code
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
