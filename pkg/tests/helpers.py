import random

from colocgraph.ingest import KM_PER_DEGREE, make_dataset

FIXTURE_A_ROWS = [
    ("M.1", "Murder", 41.8800, -87.6300),
    ("N.1", "Narcotics", 41.8803, -87.6300),
    ("T.1", "Theft", 41.8800, -87.6296),
    ("W.1", "Weapon Violation", 41.8803, -87.6296),
    ("M.2", "Murder", 41.9000, -87.6500),
    ("N.2", "Narcotics", 41.9003, -87.6500),
    ("T.2", "Theft", 41.9000, -87.6496),
    ("W.2", "Weapon Violation", 41.9500, -87.7000),
    ("M.3", "Murder", 41.8500, -87.7000),
    ("M.4", "Murder", 41.9700, -87.6000),
]

# pairs within 0.3 km, by brute-force haversine over the rows above
FIXTURE_A_EDGES = {
    ("M.1", "N.1"), ("M.1", "T.1"), ("M.1", "W.1"), ("N.1", "T.1"), ("N.1", "W.1"), ("T.1", "W.1"),
    ("M.2", "N.2"), ("M.2", "T.2"), ("N.2", "T.2"),
}

# 4 points on a ring: consecutive sides ~0.2 km, diagonals ~0.28 km; R = 0.25
RING_ROWS = [
    ("A.1", "A", 41.8800, -87.6300),
    ("B.1", "B", 41.8800 + 0.2 / KM_PER_DEGREE, -87.6300),
    ("C.1", "C", 41.8800 + 0.2 / KM_PER_DEGREE, -87.6300 + 0.2 / (KM_PER_DEGREE * 0.74457)),
    ("D.1", "D", 41.8800, -87.6300 + 0.2 / (KM_PER_DEGREE * 0.74457)),
]
RING_RADIUS = 0.25


def fixture_a():
    return make_dataset(FIXTURE_A_ROWS)


def random_rows(seed, n=200, features=5, box_km=1.0, center=(41.88, -87.63)):
    rng = random.Random(seed)
    dlat = box_km / KM_PER_DEGREE
    dlng = dlat / 0.7445
    names = [chr(ord("A") + i) for i in range(features)]
    rows = []
    for i in range(n):
        f = names[rng.randrange(features)]
        rows.append((f"{f}.{i}", f, center[0] + rng.uniform(0, dlat), center[1] + rng.uniform(0, dlng)))
    return rows


def random_dataset(seed, **kw):
    return make_dataset(random_rows(seed, **kw))


def by_name(g, pattern_names):
    return tuple(sorted(g.feature_id(n) for n in pattern_names))


def initials(g, pattern):
    return "".join(g.features[f].name[0] for f in pattern)


def ids(g, row):
    return tuple(g.instance_ids[v] for v in row)


def brute_edges(dataset, radius_km):
    """All distinct-feature pairs within the radius, as sorted instance-id pairs."""
    from colocgraph.geo import great_circle_distance

    insts = dataset.instances
    out = set()
    for i, a in enumerate(insts):
        for b in insts[i + 1:]:
            if a.feature != b.feature and great_circle_distance(a.location, b.location) <= radius_km:
                out.add(tuple(sorted((a.id, b.id))))
    return out


def graph_edges(g):
    return {tuple(sorted((g.instance_ids[u], g.instance_ids[v]))) for u, v in g.edges}


# (criterion, passed, detail) lines collected by test_acceptance and printed in the terminal summary
ACCEPTANCE = []
