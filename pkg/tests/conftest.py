import numpy as np
import pytest

from popnet.graph import Graph
from popnet.meta import NodeMetaTable


def path_graph(n):
    return Graph.from_edges([(i, i + 1) for i in range(n - 1)], n)


def cycle_graph(n):
    return Graph.from_edges([(i, (i + 1) % n) for i in range(n)], n)


def star_graph(leaves):
    return Graph.from_edges([(0, i) for i in range(1, leaves + 1)], leaves + 1)


def complete_graph(n):
    return Graph.from_edges(
        [(i, j) for i in range(n) for j in range(i + 1, n)], n)


def er_graph(n, p, seed):
    """Erdos-Renyi G(n, p) with a fixed seed."""
    rng = np.random.default_rng(seed)
    edges = [(i, j) for i in range(n) for j in range(i + 1, n)
             if rng.random() < p]
    return Graph.from_edges(edges, n)


def meta_for(g, pops, groups=None, genres=None, names=None):
    """Metadata table keyed by the graph's own ids."""
    ids = list(g.all_ids())
    n = len(ids)
    return NodeMetaTable(
        ids=ids,
        names=names if names is not None else ids,
        popularity=pops,
        genres=genres if genres is not None else [frozenset()] * n,
        group=groups if groups is not None else [None] * n,
    )


@pytest.fixture
def triangle():
    return complete_graph(3)
