"""Pure-Python kernels; same signatures as the compiled ``_ckernels``.

CSR arguments are plain lists, mutable state arrives as memoryviews over
numpy buffers so updates land in the caller's arrays.
"""

from __future__ import annotations

from collections import deque
from heapq import heappop, heappush

import numpy as np

TIE_RTOL = 1e-9


def bounded_dijkstra(indptr, indices, weights, source, bound):
    """Shortest distances from ``source`` to every node within ``bound``."""
    dist = {source: 0.0}
    done = set()
    heap = [(0.0, source)]
    while heap:
        d, u = heappop(heap)
        if u in done:
            continue
        done.add(u)
        for k in range(indptr[u], indptr[u + 1]):
            v = indices[k]
            nd = d + weights[k]
            if nd <= bound and nd < dist.get(v, np.inf):
                dist[v] = nd
                heappush(heap, (nd, v))
    nodes = np.fromiter(dist.keys(), dtype=np.int64, count=len(dist))
    dists = np.fromiter(dist.values(), dtype=np.float64, count=len(dist))
    return nodes, dists


def ball_counts(indptr, indices, weights, sources, bound, counts, delta):
    """Add ``delta`` to ``counts[v]`` for every ``v`` within ``bound`` of each source."""
    for s in sources:
        nodes, _ = bounded_dijkstra(indptr, indices, weights, s, bound)
        for v in nodes.tolist():
            counts[v] += delta


def connect_backbone(indptr, indices, root, in_backbone, visited, parent):
    """Backbone-joining BFS from ``root``; returns the number of dequeues."""
    parent[root] = -1
    visited[root] = 1
    queue = deque([root])
    dequeued = 0
    while queue:
        v = queue.popleft()
        dequeued += 1
        p = parent[v]
        if in_backbone[v] and p >= 0 and not in_backbone[p]:
            while p >= 0 and not in_backbone[p]:
                in_backbone[p] = 1
                p = parent[p]
        v_in = in_backbone[v]
        for k in range(indptr[v], indptr[v + 1]):
            n = indices[k]
            if not visited[n]:
                visited[n] = 1
                parent[n] = v
                queue.append(n)
            elif v_in:
                pn = parent[n]
                if pn >= 0 and not in_backbone[pn]:
                    parent[n] = v
    return dequeued


def _better(cost, nodes, best_cost, best_nodes):
    tol = TIE_RTOL * max(1.0, abs(best_cost))
    if cost < best_cost - tol:
        return True
    return abs(cost - best_cost) <= tol and nodes < best_nodes


def min_cost_cover(caps, costs, max_demand):
    """Cheapest cost (and node count) to cover every demand ``0..max_demand``.

    Costs within a relative 1e-9 are treated as equal; fewer nodes wins.
    """
    best_cost = np.empty(max_demand + 1, dtype=np.float64)
    best_nodes = np.empty(max_demand + 1, dtype=np.int64)
    best_cost[0] = 0.0
    best_nodes[0] = 0
    bc = [0.0] * (max_demand + 1)
    bn = [0] * (max_demand + 1)
    for d in range(1, max_demand + 1):
        cur_c, cur_n = np.inf, 0
        for cap, cost in zip(caps, costs):
            prev = d - cap if d > cap else 0
            c = bc[prev] + cost
            n = bn[prev] + 1
            if cur_c == np.inf or _better(c, n, cur_c, cur_n):
                cur_c, cur_n = c, n
        bc[d], bn[d] = cur_c, cur_n
    best_cost[:] = bc
    best_nodes[:] = bn
    return best_cost, best_nodes
