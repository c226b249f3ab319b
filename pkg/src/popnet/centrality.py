"""The five per-node centrality measures behind the sweep engine.

Degree, closeness, betweenness, eigenvector and PageRank, all returning a
uniform ``CentralityScores``. Closeness and betweenness walk every shortest
path, so they refuse graphs above a configurable node limit.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from . import _kernels as kernels
from .errors import ArgumentError, SizeLimitError
from .graph import Graph, connected_component_labels
from .spectral import DEFAULT_MAX_ITER, DEFAULT_TOL, power_iteration

MEASURES = ("degree", "closeness", "betweenness", "eigenvector", "pagerank")

#: Default refusal threshold for the all-pairs shortest-path measures.
PATH_MEASURE_NODE_LIMIT = 10_000

DEFAULT_DAMPING = 0.85


@dataclass
class CentralityScores:
    measure: str
    scores: np.ndarray
    normalization: str = "raw"
    converged: bool = True
    iterations: int = 0

    def normalized(self, kind: str) -> CentralityScores:
        """Return a copy under a different normalization (raw/l2/max1)."""
        if kind == self.normalization:
            return self
        if kind == "raw":
            raise ArgumentError("cannot un-normalize scores back to raw")
        s = self.scores
        if kind == "l2":
            norm = float(np.linalg.norm(s))
            out = s / norm if norm > 0 else s.copy()
        elif kind == "max1":
            peak = float(np.max(np.abs(s))) if s.size else 0.0
            out = s / peak if peak > 0 else s.copy()
        else:
            raise ArgumentError(f"unknown normalization {kind!r}")
        return replace(self, scores=out, normalization=kind)


def degree_centrality(g: Graph) -> CentralityScores:
    """score(i) = degree(i)."""
    return CentralityScores("degree", g.degrees().astype(np.float64))


def _check_path_limit(g: Graph, what: str, node_limit: int):
    if g.node_count > node_limit:
        raise SizeLimitError(
            f"{what} walks all shortest paths, which is quadratic-or-worse in "
            f"graph size; refusing {g.node_count} nodes (limit {node_limit}). "
            "Raise node_limit explicitly to force it."
        )


def closeness_centrality(g: Graph, node_limit: int = PATH_MEASURE_NODE_LIMIT) -> CentralityScores:
    """score(i) = N / sum of BFS distances from i (numerator N, not N-1).

    Requires a connected graph; extract a component first otherwise.
    """
    if g.node_count == 0:
        raise ArgumentError("closeness of an empty graph is undefined")
    _check_path_limit(g, "closeness centrality", node_limit)
    _, count = connected_component_labels(g)
    if count > 1:
        raise ArgumentError(
            f"graph has {count} components; closeness needs a connected graph — "
            "extract the largest connected component first"
        )
    sums, _ = kernels.closeness_sums(g.indptr, g.indices)
    n = g.node_count
    scores = np.zeros(n, dtype=np.float64)
    nonzero = sums > 0
    scores[nonzero] = n / sums[nonzero]
    return CentralityScores("closeness", scores)


def betweenness_centrality(g: Graph, node_limit: int = PATH_MEASURE_NODE_LIMIT) -> CentralityScores:
    """Shortest-path betweenness via Brandes; unordered pairs counted once."""
    if g.node_count == 0:
        raise ArgumentError("betweenness of an empty graph is undefined")
    _check_path_limit(g, "betweenness centrality", node_limit)
    return CentralityScores("betweenness", kernels.betweenness(g.indptr, g.indices))


def eigenvector_centrality(g: Graph, tol: float = DEFAULT_TOL,
                           max_iter: int = DEFAULT_MAX_ITER) -> CentralityScores:
    """Dominant adjacency eigenvector, L2-normalized, sign-canonical.

    The caller is expected to pass a connected graph (the sweep engine feeds
    the largest component); non-convergence is flagged, not raised.
    """
    pair = power_iteration(g, tol=tol, max_iter=max_iter)
    return CentralityScores("eigenvector", pair.vector, normalization="l2",
                            converged=pair.converged, iterations=pair.iterations)


def pagerank(g: Graph, d: float = DEFAULT_DAMPING, tol: float = 1e-12,
             max_iter: int = DEFAULT_MAX_ITER) -> CentralityScores:
    """PageRank over the undirected graph (every edge acts as two links).

    Degree-0 nodes redistribute their mass uniformly. Iteration stops once
    the L1 change drops below ``tol``; scores sum to 1.
    """
    if not 0 < d < 1:
        raise ArgumentError(f"damping must be in (0, 1), got {d}")
    n = g.node_count
    if n == 0:
        raise ArgumentError("pagerank of an empty graph is undefined")
    deg = g.degrees().astype(np.float64)
    dangling = deg == 0
    inv_deg = np.zeros(n)
    inv_deg[~dangling] = 1.0 / deg[~dangling]
    p = np.full(n, 1.0 / n)
    base = (1.0 - d) / n
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        contrib = p * inv_deg
        spread = float(p[dangling].sum()) / n if dangling.any() else 0.0
        p_next = base + d * (g.matvec(contrib) + spread)
        delta = float(np.abs(p_next - p).sum())
        p = p_next
        if delta < tol:
            converged = True
            break
    return CentralityScores("pagerank", p, converged=converged, iterations=it)
