"""Numpy/scipy fallback implementations of the CSR kernels.

Semantics must match ``_ckern`` exactly; the equivalence suite in
``tests/test_kernels.py`` holds both backends to that.
"""

from collections import deque

import numpy as np
import scipy.sparse as sp
from scipy.sparse import csgraph


def _row_ids(indptr, indices):
    # entry -> row lookup, needed because bincount has no segment argument
    n = indptr.shape[0] - 1
    return np.repeat(np.arange(n, dtype=np.int64), np.diff(indptr))


def matvec(indptr, indices, x, row_ids=None):
    """y[i] = sum of x[j] over neighbours j of i (unweighted CSR matvec)."""
    n = indptr.shape[0] - 1
    if row_ids is None:
        row_ids = _row_ids(indptr, indices)
    # bincount accumulates in entry order, i.e. the same left-to-right order
    # per row as the compiled loop, so results are bitwise identical
    return np.bincount(row_ids, weights=x[indices], minlength=n)


def matmat(indptr, indices, x, row_ids=None):
    """Blocked matvec: the gather is shared across columns."""
    n = indptr.shape[0] - 1
    if row_ids is None:
        row_ids = _row_ids(indptr, indices)
    gathered = x[indices]
    out = np.empty((n, x.shape[1]), dtype=np.float64)
    for c in range(x.shape[1]):
        out[:, c] = np.bincount(row_ids, weights=gathered[:, c], minlength=n)
    return out


def components(indptr, indices):
    """Label connected components; labels follow first-seen node order."""
    n = indptr.shape[0] - 1
    if n == 0:
        return np.empty(0, dtype=np.int32), 0
    mat = sp.csr_matrix(
        (np.ones(indices.shape[0], dtype=np.int8), indices, indptr), shape=(n, n)
    )
    count, raw = csgraph.connected_components(mat, directed=False)
    # canonicalise label order (first occurrence) so backends agree exactly
    order = np.full(count, -1, dtype=np.int32)
    labels = np.empty(n, dtype=np.int32)
    nxt = 0
    for i in range(n):
        r = raw[i]
        if order[r] < 0:
            order[r] = nxt
            nxt += 1
        labels[i] = order[r]
    return labels, count


def induce(indptr, indices, keep):
    """Induced subgraph on ``keep`` (bool mask); returns CSR + old index list.

    Neighbour lists stay sorted because the old-to-new map is monotone.
    """
    n = indptr.shape[0] - 1
    new_to_old = np.flatnonzero(keep).astype(np.int64)
    old_to_new = np.full(n, -1, dtype=np.int32)
    old_to_new[new_to_old] = np.arange(new_to_old.shape[0], dtype=np.int32)

    rows = _row_ids(indptr, indices)
    entry_keep = keep[rows] & keep[indices]
    kept_rows = old_to_new[rows[entry_keep]]
    new_indices = old_to_new[indices[entry_keep]]

    counts = np.bincount(kept_rows, minlength=new_to_old.shape[0])
    new_indptr = np.zeros(new_to_old.shape[0] + 1, dtype=np.int64)
    np.cumsum(counts, out=new_indptr[1:])
    return new_indptr, new_indices.astype(np.int32), new_to_old


def bfs_levels(indptr, indices, source, max_rounds=-1):
    """BFS round number per node, -1 if unreached within ``max_rounds``."""
    n = indptr.shape[0] - 1
    levels = np.full(n, -1, dtype=np.int64)
    levels[source] = 0
    queue = deque([source])
    while queue:
        v = queue.popleft()
        d = levels[v]
        if max_rounds >= 0 and d >= max_rounds:
            continue
        for w in indices[indptr[v]:indptr[v + 1]]:
            if levels[w] < 0:
                levels[w] = d + 1
                queue.append(w)
    return levels


def closeness_sums(indptr, indices):
    """Per-source sum of BFS distances and count of reached nodes (incl. self)."""
    n = indptr.shape[0] - 1
    sums = np.zeros(n, dtype=np.int64)
    reached = np.zeros(n, dtype=np.int64)
    if indices.shape[0] == 0:
        reached[:] = 1
        return sums, reached
    mat = sp.csr_matrix(
        (np.ones(indices.shape[0], dtype=np.int8), indices, indptr), shape=(n, n)
    )
    # chunked so the distance matrix never exceeds ~chunk*n doubles
    chunk = max(1, min(n, 8 * 1024 * 1024 // max(n, 1)))
    for start in range(0, n, chunk):
        src = np.arange(start, min(start + chunk, n))
        dist = csgraph.dijkstra(mat, directed=False, unweighted=True, indices=src)
        finite = np.isfinite(dist)
        dist[~finite] = 0.0
        sums[src] = dist.sum(axis=1).astype(np.int64)
        reached[src] = finite.sum(axis=1)
    return sums, reached


def betweenness(indptr, indices):
    """Brandes betweenness, each unordered pair counted once."""
    n = indptr.shape[0] - 1
    scores = np.zeros(n, dtype=np.float64)
    sigma = np.zeros(n, dtype=np.float64)
    dist = np.empty(n, dtype=np.int64)
    delta = np.zeros(n, dtype=np.float64)
    for s in range(n):
        dist.fill(-1)
        sigma.fill(0.0)
        delta.fill(0.0)
        dist[s] = 0
        sigma[s] = 1.0
        stack = []
        queue = deque([s])
        preds = [[] for _ in range(n)]
        while queue:
            v = queue.popleft()
            stack.append(v)
            dv = dist[v]
            for w in indices[indptr[v]:indptr[v + 1]]:
                if dist[w] < 0:
                    dist[w] = dv + 1
                    queue.append(w)
                if dist[w] == dv + 1:
                    sigma[w] += sigma[v]
                    preds[w].append(v)
        while stack:
            w = stack.pop()
            coeff = (1.0 + delta[w]) / sigma[w]
            for v in preds[w]:
                delta[v] += sigma[v] * coeff
            if w != s:
                scores[w] += delta[w]
    # accumulation visits each unordered pair from both endpoints
    scores *= 0.5
    return scores
