# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
# distutils: language = c++
"""Compiled kernels; signatures mirror ``fogtopo._pykernels``."""

import numpy as np
cimport numpy as cnp
from libc.math cimport INFINITY, fabs
from libcpp.pair cimport pair
from libcpp.queue cimport priority_queue
from libcpp.vector cimport vector

cnp.import_array()

ctypedef cnp.int64_t i64
ctypedef pair[double, i64] entry

cdef double TIE_RTOL = 1e-9


cdef i64 _dijkstra(const i64[:] indptr, const i64[:] indices, const double[:] weights,
                   i64 source, double bound, double[:] dist, char[:] done,
                   vector[i64]& touched) noexcept nogil:
    # max-heap on (-dist, -node) pops the smallest distance, then smallest node
    cdef priority_queue[entry] heap
    cdef i64 u, v, k
    cdef double d, nd
    touched.clear()
    dist[source] = 0.0
    touched.push_back(source)
    heap.push(entry(-0.0, -source))
    while not heap.empty():
        d = -heap.top().first
        u = -heap.top().second
        heap.pop()
        if done[u]:
            continue
        done[u] = 1
        for k in range(indptr[u], indptr[u + 1]):
            v = indices[k]
            nd = d + weights[k]
            if nd <= bound and nd < dist[v]:
                if dist[v] == INFINITY:
                    touched.push_back(v)
                dist[v] = nd
                heap.push(entry(-nd, -v))
    return <i64>touched.size()


def bounded_dijkstra(const i64[:] indptr, const i64[:] indices, const double[:] weights,
                     i64 source, double bound):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef double[:] dist = np.full(n, np.inf)
    cdef char[:] done = np.zeros(n, dtype=np.int8)
    cdef vector[i64] touched
    cdef i64 m, i
    with nogil:
        m = _dijkstra(indptr, indices, weights, source, bound, dist, done, touched)
    nodes = np.empty(m, dtype=np.int64)
    dists = np.empty(m, dtype=np.float64)
    cdef i64[:] nv = nodes
    cdef double[:] dv = dists
    for i in range(m):
        nv[i] = touched[i]
        dv[i] = dist[touched[i]]
    return nodes, dists


def ball_counts(const i64[:] indptr, const i64[:] indices, const double[:] weights,
                const i64[:] sources, double bound, i64[:] counts, i64 delta):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef double[:] dist = np.full(n, np.inf)
    cdef char[:] done = np.zeros(n, dtype=np.int8)
    cdef vector[i64] touched
    cdef Py_ssize_t s, j
    cdef i64 v
    with nogil:
        for s in range(sources.shape[0]):
            _dijkstra(indptr, indices, weights, sources[s], bound, dist, done, touched)
            for j in range(<Py_ssize_t>touched.size()):
                v = touched[j]
                counts[v] += delta
                dist[v] = INFINITY
                done[v] = 0


def connect_backbone(const i64[:] indptr, const i64[:] indices, i64 root,
                     cnp.uint8_t[:] in_backbone, cnp.uint8_t[:] visited, i64[:] parent):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef vector[i64] queue
    cdef Py_ssize_t head = 0
    cdef i64 v, p, nb, pn, k
    cdef bint v_in
    with nogil:
        queue.reserve(n)
        parent[root] = -1
        visited[root] = 1
        queue.push_back(root)
        while head < <Py_ssize_t>queue.size():
            v = queue[head]
            head += 1
            p = parent[v]
            if in_backbone[v] and p >= 0 and not in_backbone[p]:
                while p >= 0 and not in_backbone[p]:
                    in_backbone[p] = 1
                    p = parent[p]
            v_in = in_backbone[v]
            for k in range(indptr[v], indptr[v + 1]):
                nb = indices[k]
                if not visited[nb]:
                    visited[nb] = 1
                    parent[nb] = v
                    queue.push_back(nb)
                elif v_in:
                    pn = parent[nb]
                    if pn >= 0 and not in_backbone[pn]:
                        parent[nb] = v
    return head


def min_cost_cover(caps, costs, i64 max_demand):
    cdef i64[:] cap_v = np.asarray(caps, dtype=np.int64)
    cdef double[:] cost_v = np.asarray(costs, dtype=np.float64)
    best_cost = np.empty(max_demand + 1, dtype=np.float64)
    best_nodes = np.empty(max_demand + 1, dtype=np.int64)
    cdef double[:] bc = best_cost
    cdef i64[:] bn = best_nodes
    cdef Py_ssize_t t, n_types = cap_v.shape[0]
    cdef i64 d, prev, nn, cur_n
    cdef double c, cur_c, tol
    bc[0] = 0.0
    bn[0] = 0
    with nogil:
        for d in range(1, max_demand + 1):
            cur_c = INFINITY
            cur_n = 0
            for t in range(n_types):
                prev = d - cap_v[t] if d > cap_v[t] else 0
                c = bc[prev] + cost_v[t]
                nn = bn[prev] + 1
                if cur_c == INFINITY:
                    cur_c = c
                    cur_n = nn
                    continue
                tol = TIE_RTOL * (fabs(cur_c) if fabs(cur_c) > 1.0 else 1.0)
                if c < cur_c - tol or (fabs(c - cur_c) <= tol and nn < cur_n):
                    cur_c = c
                    cur_n = nn
            bc[d] = cur_c
            bn[d] = cur_n
    return best_cost, best_nodes
