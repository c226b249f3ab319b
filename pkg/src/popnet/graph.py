"""Immutable undirected graph in compressed sparse row form, plus the
subgraph/induction/sampling operations everything else is built on.

Node identifiers are opaque strings mapped to dense indices on load; all
algorithms work on indices. Graphs are simple (no self-loops, no parallel
edges) and symmetric by construction.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from . import _kernels as kernels
from .errors import ArgumentError, ParseError, PopnetError

log = logging.getLogger(__name__)


@dataclass
class IndexMap:
    """Mapping between a parent graph's node indices and a subgraph's.

    ``new_to_old`` is total on the subgraph; the reverse direction is partial
    (parent nodes outside the subgraph map to nothing).
    """

    new_to_old: np.ndarray
    old_n: int

    def __post_init__(self):
        self.new_to_old = np.asarray(self.new_to_old, dtype=np.int64)
        self._old_to_new = None

    @property
    def new_n(self) -> int:
        return int(self.new_to_old.shape[0])

    def old_to_new_array(self) -> np.ndarray:
        """Dense reverse map with -1 for parent nodes not in the subgraph."""
        if self._old_to_new is None:
            rev = np.full(self.old_n, -1, dtype=np.int64)
            rev[self.new_to_old] = np.arange(self.new_n, dtype=np.int64)
            self._old_to_new = rev
        return self._old_to_new

    def old_of(self, new_index: int) -> int:
        return int(self.new_to_old[new_index])

    def new_of(self, old_index: int):
        """Subgraph index of a parent node, or None if it was dropped."""
        v = self.old_to_new_array()[old_index]
        return None if v < 0 else int(v)

    def compose(self, inner: IndexMap) -> IndexMap:
        """Map through two levels: self is parent->mid, inner is mid->leaf."""
        if inner.old_n != self.new_n:
            raise ArgumentError("index maps do not chain: sizes disagree")
        return IndexMap(self.new_to_old[inner.new_to_old], self.old_n)

    @classmethod
    def identity(cls, n: int) -> IndexMap:
        return cls(np.arange(n, dtype=np.int64), n)


class Graph:
    """Undirected unweighted graph with sorted CSR neighbour lists.

    Instances are immutable after construction and safe to share across
    threads; all operations on them are pure reads.
    """

    __slots__ = ("indptr", "indices", "ids", "_row_ids_cache")

    def __init__(self, indptr, indices, ids=None):
        self.indptr = np.ascontiguousarray(indptr, dtype=np.int64)
        self.indices = np.ascontiguousarray(indices, dtype=np.int32)
        self.ids = tuple(ids) if ids is not None else None
        if self.ids is not None and len(self.ids) != self.node_count:
            raise ArgumentError("ids length does not match node count")
        self._row_ids_cache = None

    @property
    def node_count(self) -> int:
        return int(self.indptr.shape[0] - 1)

    @property
    def edge_count(self) -> int:
        return int(self.indices.shape[0] // 2)

    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def neighbors(self, i: int) -> np.ndarray:
        return self.indices[self.indptr[i]:self.indptr[i + 1]]

    def _row_ids(self):
        if self._row_ids_cache is None:
            self._row_ids_cache = np.repeat(
                np.arange(self.node_count, dtype=np.int64), np.diff(self.indptr)
            )
        return self._row_ids_cache

    def matvec(self, x: np.ndarray) -> np.ndarray:
        """Adjacency-operator product A @ x."""
        if kernels.BACKEND == "py":
            return kernels.matvec(self.indptr, self.indices, x, self._row_ids())
        return kernels.matvec(self.indptr, self.indices, x)

    def matmat(self, x: np.ndarray) -> np.ndarray:
        """Blocked product A @ X over the columns of a (n, c) array."""
        if kernels.BACKEND == "py":
            return kernels.matmat(self.indptr, self.indices, x, self._row_ids())
        return kernels.matmat(self.indptr, self.indices, x)

    def id_of(self, i: int) -> str:
        return self.ids[i] if self.ids is not None else str(i)

    def all_ids(self) -> tuple:
        if self.ids is not None:
            return self.ids
        return tuple(str(i) for i in range(self.node_count))

    def check_invariants(self):
        """Raise if the CSR structure violates the graph contract."""
        n = self.node_count
        if self.indptr[0] != 0 or self.indptr[-1] != self.indices.shape[0]:
            raise PopnetError("corrupt indptr")
        for i in range(n):
            row = self.neighbors(i)
            if row.size and (np.any(np.diff(row) <= 0)):
                raise PopnetError(f"neighbour list of {i} not strictly ascending")
            if np.any(row == i):
                raise PopnetError(f"self-loop at {i}")
            for j in row:
                if i not in self.neighbors(int(j)):
                    raise PopnetError(f"asymmetric edge {i}-{j}")

    def __repr__(self):
        return f"Graph(nodes={self.node_count}, edges={self.edge_count})"

    @classmethod
    def from_edges(cls, edges, n: int, ids=None) -> Graph:
        """Build a simple symmetric graph from an (m, 2) integer edge array.

        Self-loops are dropped, duplicates (in either orientation) collapse
        to one undirected edge.
        """
        e = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if e.size and (e.min() < 0 or e.max() >= n):
            raise ArgumentError("edge endpoint out of range")
        e = e[e[:, 0] != e[:, 1]]
        if e.shape[0] == 0:
            return cls(np.zeros(n + 1, dtype=np.int64), np.empty(0, dtype=np.int32), ids)
        # encode both orientations as u*n+v and dedupe once
        keys = np.concatenate([e[:, 0] * n + e[:, 1], e[:, 1] * n + e[:, 0]])
        keys = np.unique(keys)
        rows = keys // n
        cols = keys % n
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(rows, minlength=n), out=indptr[1:])
        return cls(indptr, cols.astype(np.int32), ids)


def load_edge_list(stream) -> Graph:
    """Parse a tab-separated edge list into a Graph.

    One edge per line (``u<TAB>v``), ``#`` lines are comments, blank lines are
    skipped. Node indices follow first appearance. Self-loops and duplicate
    edges are dropped (counts logged).
    """
    index: dict = {}
    us: list = []
    vs: list = []
    self_loops = 0
    for line_no, raw in enumerate(stream, start=1):
        line = raw.rstrip("\r\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2 or not parts[0] or not parts[1]:
            raise ParseError(f"expected 'u<TAB>v', got {line!r}", line=line_no)
        u, v = parts
        iu = index.setdefault(u, len(index))
        iv = index.setdefault(v, len(index))
        if iu == iv:
            self_loops += 1
            continue
        us.append(iu)
        vs.append(iv)
    if not index:
        raise PopnetError("empty edge list: no nodes found")
    n = len(index)
    edges = np.stack([np.array(us, dtype=np.int64), np.array(vs, dtype=np.int64)], axis=1) \
        if us else np.empty((0, 2), dtype=np.int64)
    g = Graph.from_edges(edges, n, ids=list(index))
    dropped_dups = len(us) - g.edge_count
    if self_loops or dropped_dups:
        log.info(
            "edge list cleanup: dropped %d self-loops and %d duplicate edges",
            self_loops, dropped_dups,
        )
    return g


def write_edge_list(g: Graph, stream):
    """Write the graph in the tab-separated format load_edge_list reads."""
    ids = g.all_ids()
    indptr, indices = g.indptr, g.indices
    for i in range(g.node_count):
        for j in indices[indptr[i]:indptr[i + 1]]:
            if j > i:
                stream.write(f"{ids[i]}\t{ids[j]}\n")


def subgraph(g: Graph, keep: np.ndarray, keep_ids: bool = True) -> tuple[Graph, IndexMap]:
    """Induced subgraph on the boolean mask ``keep``.

    ``keep_ids=False`` skips carrying node ids over (the IndexMap still maps
    back); callers that only work with indices avoid materialising id lists.
    """
    keep = np.asarray(keep, dtype=bool)
    if keep.shape[0] != g.node_count:
        raise ArgumentError("mask length does not match node count")
    new_indptr, new_indices, new_to_old = kernels.induce(g.indptr, g.indices, keep)
    if not keep_ids:
        sub_ids = None
    elif g.ids is not None:
        sub_ids = [g.ids[i] for i in new_to_old]
    else:
        # materialise parent indices so metadata joins keep working downstream
        sub_ids = [str(i) for i in new_to_old]
    return Graph(new_indptr, new_indices, sub_ids), IndexMap(new_to_old, g.node_count)


def induce_by_popularity(g: Graph, meta, threshold: float) -> tuple[Graph, IndexMap]:
    """Subgraph on nodes with popularity >= threshold (inclusive)."""
    if not 0 <= threshold <= 100:
        raise ArgumentError(f"threshold must be in [0, 100], got {threshold}")
    pop = meta.align(g).popularity
    return subgraph(g, pop >= threshold)


def remove_popularity_band(g: Graph, meta, lo: float, hi: float) -> tuple[Graph, IndexMap]:
    """Subgraph with the closed popularity band [lo, hi] removed."""
    if lo > hi:
        raise ArgumentError(f"band bounds out of order: {lo} > {hi}")
    pop = meta.align(g).popularity
    return subgraph(g, (pop < lo) | (pop > hi))


def connected_component_labels(g: Graph) -> tuple[np.ndarray, int]:
    """Component label per node, labels ordered by smallest member index."""
    return kernels.components(g.indptr, g.indices)


def largest_connected_component(g: Graph, keep_ids: bool = True) -> tuple[Graph, IndexMap]:
    """Induced subgraph of the largest component.

    Size ties go to the component containing the smallest original index,
    which is the lowest label under first-seen labelling.
    """
    if g.node_count == 0:
        return subgraph(g, np.zeros(0, dtype=bool), keep_ids=keep_ids)
    labels, count = connected_component_labels(g)
    sizes = np.bincount(labels, minlength=count)
    chosen = int(np.argmax(sizes))  # argmax takes the first (lowest) label on ties
    return subgraph(g, labels == chosen, keep_ids=keep_ids)


def snowball_sample(g: Graph, seed: int, max_rounds=None) -> tuple[Graph, IndexMap]:
    """Breadth-first expansion from ``seed``; None means until exhaustion."""
    if not 0 <= seed < g.node_count:
        raise ArgumentError(f"seed node {seed} out of range")
    rounds = -1 if max_rounds is None else int(max_rounds)
    if max_rounds is not None and rounds < 0:
        raise ArgumentError("max_rounds must be nonnegative")
    levels = kernels.bfs_levels(g.indptr, g.indices, seed, rounds)
    return subgraph(g, levels >= 0)
