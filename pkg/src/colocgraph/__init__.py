"""Spatial co-location pattern mining over a materialized neighborhood graph."""

__version__ = "0.1.0"

from .geo import Feature, FeatureInstance, GeoPoint, feature_order, great_circle_distance
from .graph import (NeighborhoodGraph, build_graph, get_cycles, is_clique, load_graph, save_graph,
                    update_radius)
from .ingest import Dataset, SyntheticConfig, generate_synthetic, load_csv
from .miner import MiningParams, MiningResult, mine, mine_enum_g, mine_enum_k, mine_extend
from .oracle import oracle_mine, oracle_row_instances
from .prevalence import PrevalenceReport, apriori_gen, compute_prevalence
