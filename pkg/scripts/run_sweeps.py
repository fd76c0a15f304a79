#!/usr/bin/env python3
"""Parameter sweeps over N, R, threshold PI and pattern size, plus graph build
vs. incremental update timing. Prints markdown tables and optionally dumps JSON.

    python scripts/run_sweeps.py --quick
    python scripts/run_sweeps.py --out sweeps.json
"""

import argparse
import json
import time

from colocgraph.bench import mean_degree
from colocgraph.graph import build_graph, update_radius
from colocgraph.ingest import SyntheticConfig, generate_synthetic
from colocgraph.miner import MiningParams, mine

ORDER = ("extend", "enum_g", "enum_k")


def dataset(n, features, seed):
    return generate_synthetic(SyntheticConfig(feature_count=features, instance_count=n, seed=seed))


def run_miners(g, min_prev, max_size, threads):
    row = {}
    ref = None
    for alg in ORDER:
        res = mine(g, MiningParams(min_prev, max_size, alg, thread_count=threads))
        summary = {r.pattern: r.participation_index for r in res.reports()}
        if ref is None:
            ref = summary
        elif summary != ref:
            raise SystemExit(f"miners disagree on {alg}")
        row[alg] = {"total": res.total_seconds, "per_size": res.per_size_seconds}
    return row


def table(title, key, rows):
    print(f"\n### {title}\n")
    print(f"| {key} | " + " | ".join(ORDER) + " |")
    print("|---" * (len(ORDER) + 1) + "|")
    for k, row in rows:
        print(f"| {k} | " + " | ".join(f"{row[a]['total']:.3f}" for a in ORDER) + " |")


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--features", type=int, default=33)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--quick", action="store_true", help="smaller N and radii for a fast run")
    ap.add_argument("--out", help="write all measurements as JSON")
    args = ap.parse_args()

    if args.quick:
        ns, default_n = [2000, 4000, 6000], 2000
    else:
        # full-scale ranges; expect hours in pure Python at the upper end
        ns, default_n = [10000, 20000, 30000], 10000
    radii, default_r = [0.3, 0.4, 0.5], 0.3
    update_radii = [0.4, 0.5, 0.6, 0.7, 0.8, 0.9]
    pis, default_pi = [0.01, 0.05, 0.1], 0.1
    out = {}

    rows = []
    for n in ns:
        g = build_graph(dataset(n, args.features, args.seed), default_r)
        rows.append((n, run_miners(g, default_pi, 4, args.threads)))
    table(f"time (s) vs N  (R={default_r} km, PI={default_pi}, size<=4)", "N", rows)
    out["vs_n"] = rows

    base = dataset(default_n, args.features, args.seed)
    rows = []
    for r in radii:
        g = build_graph(base, r)
        rows.append((r, run_miners(g, default_pi, 4, args.threads)))
    table(f"time (s) vs R  (N={default_n}, PI={default_pi})", "R km", rows)
    out["vs_r"] = rows

    g = build_graph(base, default_r)
    print(f"\n(default graph: |V|={len(g)} |E|={g.edge_count} mean degree {mean_degree(g):.2f})")
    rows = [(pi, run_miners(g, pi, 4, args.threads)) for pi in pis]
    table(f"time (s) vs threshold PI  (N={default_n}, R={default_r} km)", "PI", rows)
    out["vs_pi"] = rows

    per_size = run_miners(g, pis[0], 7, args.threads)
    sizes = sorted({s for a in ORDER for s in per_size[a]["per_size"]})
    print(f"\n### cumulative time (s) vs pattern size  (PI={pis[0]})\n")
    print("| size | " + " | ".join(ORDER) + " |")
    print("|---" * (len(ORDER) + 1) + "|")
    for s in sizes:
        cells = [sum(t for k, t in per_size[a]["per_size"].items() if k <= s) for a in ORDER]
        print(f"| {s} | " + " | ".join(f"{c:.3f}" for c in cells) + " |")
    out["vs_size"] = per_size

    print("\n### graph creation vs incremental update (s)\n")
    print("| R km | create | update | edges |")
    print("|---|---|---|---|")
    g = build_graph(base, update_radii[0])
    rows = []
    for r in update_radii[1:]:
        t0 = time.perf_counter()
        fresh = build_graph(base, r)
        create = time.perf_counter() - t0
        t0 = time.perf_counter()
        update_radius(g, r)
        update = time.perf_counter() - t0
        assert g.edges == fresh.edges
        rows.append({"radius_km": r, "create": create, "update": update, "edges": g.edge_count})
        print(f"| {r} | {create:.3f} | {update:.3f} | {g.edge_count} |")
    out["create_vs_update"] = rows

    if args.out:
        with open(args.out, "w") as fh:
            json.dump(out, fh, indent=2, default=str)


if __name__ == "__main__":
    main()
