import random
from pathlib import Path

import networkx as nx
import pytest

from tedgraph.graph import Graph, build_graph
from tedgraph.io import parse_tudataset

DATA = Path(__file__).parent / "data"
MUTAG_DIR = DATA / "MUTAG"


def from_nx(g: nx.Graph) -> Graph:
    nodes = sorted(g.nodes())
    index = {v: k for k, v in enumerate(nodes)}
    return build_graph(len(nodes), [(index[u], index[v]) for u, v in g.edges()])


def to_nx(g: Graph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(g.node_count))
    h.add_edges_from(g.edges)
    return h


def atlas(max_nodes: int = 6, min_nodes: int = 1) -> list[Graph]:
    """Every graph on ``min_nodes..max_nodes`` nodes up to isomorphism (networkx atlas)."""
    return [from_nx(g) for g in nx.graph_atlas_g() if min_nodes <= g.number_of_nodes() <= max_nodes]


def random_graph(rng: random.Random, n: int, p: float | None = None) -> Graph:
    p = rng.random() if p is None else p
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    return build_graph(n, edges)


@pytest.fixture(scope="session")
def atlas6():
    return atlas(6)


@pytest.fixture(scope="session")
def mutag():
    return parse_tudataset(MUTAG_DIR)
