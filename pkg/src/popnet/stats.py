"""Descriptive network statistics: assortativity, homophily, genre overlap."""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import ArgumentError, UndefinedStatisticError
from .graph import Graph


def _pearson(x: np.ndarray, y: np.ndarray) -> float:
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    xc = x - x.mean()
    yc = y - y.mean()
    sx = np.sqrt((xc * xc).sum())
    sy = np.sqrt((yc * yc).sum())
    if sx == 0.0 or sy == 0.0:
        raise UndefinedStatisticError("zero variance: correlation undefined")
    return float((xc * yc).sum() / (sx * sy))


def _endpoint_pairs(g: Graph) -> tuple[np.ndarray, np.ndarray]:
    # ordered pairs: every undirected edge contributes both orientations
    rows = np.repeat(np.arange(g.node_count, dtype=np.int64), np.diff(g.indptr))
    return rows, g.indices.astype(np.int64)


def degree_assortativity(g: Graph) -> float:
    """Pearson correlation of endpoint degrees over ordered edge pairs."""
    if g.edge_count == 0:
        raise ArgumentError("degree assortativity needs at least one edge")
    deg = g.degrees().astype(np.float64)
    rows, cols = _endpoint_pairs(g)
    return _pearson(deg[rows], deg[cols])


def attribute_assortativity(g: Graph, values) -> float:
    """Pearson correlation of a node attribute over ordered edge pairs."""
    if g.edge_count == 0:
        raise ArgumentError("attribute assortativity needs at least one edge")
    values = np.asarray(values, dtype=np.float64)
    if values.shape[0] != g.node_count:
        raise ArgumentError("attribute length does not match node count")
    rows, cols = _endpoint_pairs(g)
    return _pearson(values[rows], values[cols])


def popularity_homophily(g: Graph, meta) -> float:
    return attribute_assortativity(g, meta.align(g).popularity)


def degree_popularity_correlation(g: Graph, meta) -> float:
    """Pearson correlation of (degree, popularity) over nodes."""
    pop = meta.align(g).popularity
    return _pearson(g.degrees().astype(np.float64), pop)


class GenreOverlap(NamedTuple):
    fraction: float
    eligible_edges: int


def genre_edge_overlap(g: Graph, meta) -> GenreOverlap:
    """Fraction of genre-tagged edges whose endpoints share at least one genre.

    Only edges where both endpoints carry a nonempty genre set are eligible.
    """
    genres = meta.align(g).genres
    indptr, indices = g.indptr, g.indices
    eligible = 0
    overlapping = 0
    for i in range(g.node_count):
        gi = genres[i]
        if not gi:
            continue
        for j in indices[indptr[i]:indptr[i + 1]]:
            if j <= i:
                continue
            gj = genres[j]
            if not gj:
                continue
            eligible += 1
            if gi & gj:
                overlapping += 1
    if eligible == 0:
        raise UndefinedStatisticError("no edges with genre metadata on both endpoints")
    return GenreOverlap(overlapping / eligible, eligible)


def group_mean_degree(g: Graph, meta, group: str) -> float:
    """Arithmetic mean degree over nodes carrying the given group label."""
    mask = meta.align(g).group_mask(group)
    if not mask.any():
        raise ArgumentError(f"group {group!r} has no members")
    return float(g.degrees()[mask].mean())
