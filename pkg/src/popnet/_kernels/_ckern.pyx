# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Cython implementations of the CSR kernels (see _pykern for the contract)."""

import numpy as np

cimport numpy as cnp
from libc.stdint cimport int32_t, int64_t, uint8_t

cnp.import_array()


def matvec(indptr, indices, x, row_ids=None):
    """y[i] = sum of x[j] over neighbours j of i (unweighted CSR matvec)."""
    cdef cnp.ndarray[int64_t, ndim=1] ip = np.ascontiguousarray(indptr, dtype=np.int64)
    cdef cnp.ndarray[int32_t, ndim=1] ix = np.ascontiguousarray(indices, dtype=np.int32)
    cdef cnp.ndarray[double, ndim=1] xv = np.ascontiguousarray(x, dtype=np.float64)
    cdef Py_ssize_t n = ip.shape[0] - 1
    cdef cnp.ndarray[double, ndim=1] out = np.zeros(n, dtype=np.float64)
    cdef Py_ssize_t i
    cdef int64_t k
    cdef double acc
    with nogil:
        for i in range(n):
            acc = 0.0
            for k in range(ip[i], ip[i + 1]):
                acc += xv[ix[k]]
            out[i] = acc
    return out


def matmat(indptr, indices, x, row_ids=None):
    """Blocked matvec: one CSR pass updating every column of x at once."""
    cdef cnp.ndarray[int64_t, ndim=1] ip = np.ascontiguousarray(indptr, dtype=np.int64)
    cdef cnp.ndarray[int32_t, ndim=1] ix = np.ascontiguousarray(indices, dtype=np.int32)
    cdef cnp.ndarray[double, ndim=2] xv = np.ascontiguousarray(x, dtype=np.float64)
    cdef Py_ssize_t n = ip.shape[0] - 1
    cdef Py_ssize_t ncol = xv.shape[1]
    cdef cnp.ndarray[double, ndim=2] out = np.zeros((n, ncol), dtype=np.float64)
    cdef Py_ssize_t i, c, j
    cdef int64_t k
    with nogil:
        for i in range(n):
            for k in range(ip[i], ip[i + 1]):
                j = ix[k]
                for c in range(ncol):
                    out[i, c] += xv[j, c]
    return out


def components(indptr, indices):
    """Label connected components; labels follow first-seen node order."""
    cdef cnp.ndarray[int64_t, ndim=1] ip = np.ascontiguousarray(indptr, dtype=np.int64)
    cdef cnp.ndarray[int32_t, ndim=1] ix = np.ascontiguousarray(indices, dtype=np.int32)
    cdef Py_ssize_t n = ip.shape[0] - 1
    cdef cnp.ndarray[int32_t, ndim=1] labels = np.full(n, -1, dtype=np.int32)
    cdef cnp.ndarray[int32_t, ndim=1] queue = np.empty(n, dtype=np.int32)
    cdef Py_ssize_t head, tail
    cdef int32_t label = 0
    cdef Py_ssize_t s, v, w
    cdef int64_t k
    if n == 0:
        return labels, 0
    with nogil:
        for s in range(n):
            if labels[s] >= 0:
                continue
            labels[s] = label
            queue[0] = <int32_t> s
            head = 0
            tail = 1
            while head < tail:
                v = queue[head]
                head += 1
                for k in range(ip[v], ip[v + 1]):
                    w = ix[k]
                    if labels[w] < 0:
                        labels[w] = label
                        queue[tail] = <int32_t> w
                        tail += 1
            label += 1
    return labels, int(label)


def induce(indptr, indices, keep):
    """Induced subgraph on ``keep`` (bool mask); returns CSR + old index list."""
    cdef cnp.ndarray[int64_t, ndim=1] ip = np.ascontiguousarray(indptr, dtype=np.int64)
    cdef cnp.ndarray[int32_t, ndim=1] ix = np.ascontiguousarray(indices, dtype=np.int32)
    cdef cnp.ndarray[uint8_t, ndim=1] kp = np.ascontiguousarray(keep, dtype=np.uint8)
    cdef Py_ssize_t n = ip.shape[0] - 1
    cdef cnp.ndarray[int64_t, ndim=1] new_to_old = np.empty(n, dtype=np.int64)
    cdef cnp.ndarray[int32_t, ndim=1] old_to_new = np.full(n, -1, dtype=np.int32)
    cdef Py_ssize_t i, nn = 0
    cdef int64_t k, ne = 0
    with nogil:
        for i in range(n):
            if kp[i]:
                old_to_new[i] = <int32_t> nn
                new_to_old[nn] = i
                nn += 1
        for i in range(n):
            if kp[i]:
                for k in range(ip[i], ip[i + 1]):
                    if kp[ix[k]]:
                        ne += 1
    cdef cnp.ndarray[int64_t, ndim=1] new_indptr = np.zeros(nn + 1, dtype=np.int64)
    cdef cnp.ndarray[int32_t, ndim=1] new_indices = np.empty(ne, dtype=np.int32)
    cdef int64_t pos = 0
    cdef Py_ssize_t r = 0
    with nogil:
        for i in range(n):
            if kp[i]:
                for k in range(ip[i], ip[i + 1]):
                    if kp[ix[k]]:
                        new_indices[pos] = old_to_new[ix[k]]
                        pos += 1
                r += 1
                new_indptr[r] = pos
    return new_indptr, new_indices, new_to_old[:nn].copy()


def bfs_levels(indptr, indices, source, max_rounds=-1):
    """BFS round number per node, -1 if unreached within ``max_rounds``."""
    cdef cnp.ndarray[int64_t, ndim=1] ip = np.ascontiguousarray(indptr, dtype=np.int64)
    cdef cnp.ndarray[int32_t, ndim=1] ix = np.ascontiguousarray(indices, dtype=np.int32)
    cdef Py_ssize_t n = ip.shape[0] - 1
    cdef cnp.ndarray[int64_t, ndim=1] levels = np.full(n, -1, dtype=np.int64)
    cdef cnp.ndarray[int32_t, ndim=1] queue = np.empty(n, dtype=np.int32)
    cdef Py_ssize_t head = 0, tail = 1
    cdef Py_ssize_t v, w
    cdef int64_t k, d, rounds = max_rounds
    cdef Py_ssize_t src = source
    levels[src] = 0
    queue[0] = <int32_t> src
    with nogil:
        while head < tail:
            v = queue[head]
            head += 1
            d = levels[v]
            if rounds >= 0 and d >= rounds:
                continue
            for k in range(ip[v], ip[v + 1]):
                w = ix[k]
                if levels[w] < 0:
                    levels[w] = d + 1
                    queue[tail] = <int32_t> w
                    tail += 1
    return levels


def closeness_sums(indptr, indices):
    """Per-source sum of BFS distances and count of reached nodes (incl. self)."""
    cdef cnp.ndarray[int64_t, ndim=1] ip = np.ascontiguousarray(indptr, dtype=np.int64)
    cdef cnp.ndarray[int32_t, ndim=1] ix = np.ascontiguousarray(indices, dtype=np.int32)
    cdef Py_ssize_t n = ip.shape[0] - 1
    cdef cnp.ndarray[int64_t, ndim=1] sums = np.zeros(n, dtype=np.int64)
    cdef cnp.ndarray[int64_t, ndim=1] reached = np.zeros(n, dtype=np.int64)
    cdef cnp.ndarray[int64_t, ndim=1] dist = np.empty(n, dtype=np.int64)
    cdef cnp.ndarray[int32_t, ndim=1] queue = np.empty(n, dtype=np.int32)
    cdef Py_ssize_t s, v, w, head, tail
    cdef int64_t k, total, cnt
    with nogil:
        for s in range(n):
            for v in range(n):
                dist[v] = -1
            dist[s] = 0
            queue[0] = <int32_t> s
            head = 0
            tail = 1
            total = 0
            cnt = 1
            while head < tail:
                v = queue[head]
                head += 1
                for k in range(ip[v], ip[v + 1]):
                    w = ix[k]
                    if dist[w] < 0:
                        dist[w] = dist[v] + 1
                        total += dist[w]
                        cnt += 1
                        queue[tail] = <int32_t> w
                        tail += 1
            sums[s] = total
            reached[s] = cnt
    return sums, reached


def betweenness(indptr, indices):
    """Brandes betweenness, each unordered pair counted once.

    Predecessors of w are a subset of its neighbour list, so the flat
    predecessor store reuses the CSR layout (slots indptr[w]..).
    """
    cdef cnp.ndarray[int64_t, ndim=1] ip = np.ascontiguousarray(indptr, dtype=np.int64)
    cdef cnp.ndarray[int32_t, ndim=1] ix = np.ascontiguousarray(indices, dtype=np.int32)
    cdef Py_ssize_t n = ip.shape[0] - 1
    cdef int64_t m = ix.shape[0]
    cdef cnp.ndarray[double, ndim=1] scores = np.zeros(n, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] sigma = np.zeros(n, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] delta = np.zeros(n, dtype=np.float64)
    cdef cnp.ndarray[int64_t, ndim=1] dist = np.empty(n, dtype=np.int64)
    cdef cnp.ndarray[int32_t, ndim=1] queue = np.empty(n, dtype=np.int32)
    cdef cnp.ndarray[int32_t, ndim=1] order = np.empty(n, dtype=np.int32)
    cdef cnp.ndarray[int32_t, ndim=1] pred = np.empty(m, dtype=np.int32)
    cdef cnp.ndarray[int32_t, ndim=1] pred_count = np.zeros(n, dtype=np.int32)
    cdef Py_ssize_t s, v, w, head, tail, n_order, j
    cdef int64_t k
    cdef double coeff
    with nogil:
        for s in range(n):
            for v in range(n):
                dist[v] = -1
                sigma[v] = 0.0
                delta[v] = 0.0
                pred_count[v] = 0
            dist[s] = 0
            sigma[s] = 1.0
            queue[0] = <int32_t> s
            head = 0
            tail = 1
            n_order = 0
            while head < tail:
                v = queue[head]
                head += 1
                order[n_order] = <int32_t> v
                n_order += 1
                for k in range(ip[v], ip[v + 1]):
                    w = ix[k]
                    if dist[w] < 0:
                        dist[w] = dist[v] + 1
                        queue[tail] = <int32_t> w
                        tail += 1
                    if dist[w] == dist[v] + 1:
                        sigma[w] += sigma[v]
                        pred[ip[w] + pred_count[w]] = <int32_t> v
                        pred_count[w] += 1
            for j in range(n_order - 1, -1, -1):
                w = order[j]
                coeff = (1.0 + delta[w]) / sigma[w]
                for k in range(ip[w], ip[w] + pred_count[w]):
                    v = pred[k]
                    delta[v] += sigma[v] * coeff
                if w != s:
                    scores[w] += delta[w]
    scores *= 0.5
    return scores
