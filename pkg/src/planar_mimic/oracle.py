"""Independent reference computations used to cross-check the fast paths.

Small graphs are solved by enumerating every vertex bipartition.  Larger
ones go through networkx's flow code, which shares nothing with
:mod:`planar_mimic.mincut`.
"""
from __future__ import annotations

import heapq
import itertools

import networkx as nx

from .graph import PlanarGraph
from .mincut import full_mask, members

EXHAUSTIVE_LIMIT = 14


def brute_mincut(G: PlanarGraph, S: int) -> int:
    """Minimum S-separating cut value by trying every bipartition."""
    if G.n > EXHAUSTIVE_LIMIT:
        raise ValueError(f"exhaustive oracle limited to n <= {EXHAUSTIVE_LIMIT}")
    src = set(members(G, S))
    dst = set(members(G, full_mask(G.k) ^ S))
    free = [v for v in range(G.n) if v not in src and v not in dst]
    best = None
    for bits in itertools.product((0, 1), repeat=len(free)):
        side = src | {v for v, b in zip(free, bits) if b}
        cost = sum(w for u, v, w in G.edges if (u in side) != (v in side))
        if best is None or cost < best:
            best = cost
    return best


def flow_mincut(G: PlanarGraph, S: int) -> int:
    """Minimum S-separating cut value via networkx max-flow."""
    D = nx.DiGraph()
    for u, v, w in G.edges:
        if u == v:
            continue
        for a, b in ((u, v), (v, u)):
            if D.has_edge(a, b):
                D[a][b]["capacity"] += w
            else:
                D.add_edge(a, b, capacity=w)
    D.add_nodes_from(range(G.n))
    for t in members(G, S):
        D.add_edge("s", t)  # no capacity attribute means infinite
    for t in members(G, full_mask(G.k) ^ S):
        D.add_edge(t, "t")
    value, _ = nx.minimum_cut(D, "s", "t")
    return int(value)


def reference_mincut(G: PlanarGraph, S: int) -> int:
    if G.n <= EXHAUSTIVE_LIMIT:
        return brute_mincut(G, S)
    return flow_mincut(G, S)


def all_pairs_distances(G: PlanarGraph) -> list[list[float]]:
    """Floyd-Warshall over edge weights, treating edges as undirected."""
    inf = float("inf")
    dist = [[inf] * G.n for _ in range(G.n)]
    for v in range(G.n):
        dist[v][v] = 0
    for u, v, w in G.edges:
        if w < dist[u][v]:
            dist[u][v] = dist[v][u] = w
    for k in range(G.n):
        dk = dist[k]
        for i in range(G.n):
            dik = dist[i][k]
            if dik == inf:
                continue
            di = dist[i]
            for j in range(G.n):
                if dik + dk[j] < di[j]:
                    di[j] = dik + dk[j]
    return dist


def dijkstra(G: PlanarGraph, source: int) -> list[float]:
    dist = [float("inf")] * G.n
    dist[source] = 0
    heap = [(0, source)]
    while heap:
        d, v = heapq.heappop(heap)
        if d > dist[v]:
            continue
        for dd in G.rotation[v]:
            u = G.head(dd)
            nd = d + G.weight(dd >> 1)
            if nd < dist[u]:
                dist[u] = nd
                heapq.heappush(heap, (nd, u))
    return dist
