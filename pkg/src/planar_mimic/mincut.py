"""Exact minimum terminal cuts with a deterministic tie-break.

Edge ``i`` gets perturbed weight ``c_i * 2**(m+1) + 2**i``.  The low bits
of any sum of distinct edges stay below ``2**m``, so the base cost of a
perturbed optimum is a true optimum, and two different edge sets never tie.
Terminal subsets are bitmasks over ``G.terminals``.
"""
from __future__ import annotations

import weakref
from collections import deque
from dataclasses import dataclass
from typing import Iterable

from .graph import PlanarGraph


class SubsetError(ValueError):
    """Terminal subset is empty, full, or out of range."""


@dataclass(frozen=True)
class Cutset:
    mask: int  # canonical: min(S, T \ S)
    edges: frozenset[int]
    cost: int
    perturbed: int


@dataclass(frozen=True)
class ComponentPartition:
    components: tuple[frozenset[int], ...]
    terminal_masks: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.components)

    def index_of(self) -> dict[int, int]:
        return {v: i for i, comp in enumerate(self.components) for v in comp}


def full_mask(k: int) -> int:
    return (1 << k) - 1


def canonical(mask: int, k: int) -> int:
    return min(mask, full_mask(k) ^ mask)


def check_subset(G: PlanarGraph, S: int) -> None:
    if not 0 < S < full_mask(G.k):
        raise SubsetError(f"terminal subset {S:#x} must be non-empty and proper (k={G.k})")


def mask_of(G: PlanarGraph, vertices: Iterable[int]) -> int:
    idx = G.terminal_index
    mask = 0
    for v in vertices:
        if v in idx:
            mask |= 1 << idx[v]
    return mask


def members(G: PlanarGraph, mask: int) -> tuple[int, ...]:
    return tuple(t for i, t in enumerate(G.terminals) if mask >> i & 1)


def perturbed_weight(G: PlanarGraph, e: int) -> int:
    return (G.weight(e) << (G.m + 1)) | (1 << e)


def perturbed_cost(G: PlanarGraph, edge_ids: Iterable[int]) -> int:
    return sum(perturbed_weight(G, e) for e in edge_ids)


def base_cost(G: PlanarGraph, edge_ids: Iterable[int]) -> int:
    return sum(G.weight(e) for e in edge_ids)


class _FlowNetwork:
    """Dinic max-flow on the undirected graph plus a super source and sink."""

    def __init__(self, G: PlanarGraph):
        self.G = G
        n = G.n
        self.src, self.dst = n, n + 1
        self.head: list[int] = []
        self.cap0: list[int] = []
        self.adj: list[list[int]] = [[] for _ in range(n + 2)]
        for e in range(G.m):
            u, v = G.endpoints(e)
            if u == v:
                continue
            w = perturbed_weight(G, e)
            self._arc(u, v, w, w)
        self.base_arcs = len(self.head)
        self.inf = sum(perturbed_weight(G, e) for e in range(G.m)) + 1

    def _arc(self, u: int, v: int, cuv: int, cvu: int) -> None:
        self.adj[u].append(len(self.head))
        self.head.append(v)
        self.cap0.append(cuv)
        self.adj[v].append(len(self.head))
        self.head.append(u)
        self.cap0.append(cvu)

    def source_side(self, sources: Iterable[int], sinks: Iterable[int]) -> set[int]:
        head = list(self.head)
        cap = list(self.cap0)
        adj = [list(a) for a in self.adj]
        src, dst = self.src, self.dst
        for s in sources:
            adj[src].append(len(head)); head.append(s); cap.append(self.inf)
            adj[s].append(len(head)); head.append(src); cap.append(0)
        for t in sinks:
            adj[t].append(len(head)); head.append(dst); cap.append(self.inf)
            adj[dst].append(len(head)); head.append(t); cap.append(0)
        N = len(adj)
        while True:
            level = [-1] * N
            level[src] = 0
            q = deque([src])
            while q:
                x = q.popleft()
                for a in adj[x]:
                    if cap[a] > 0 and level[head[a]] < 0:
                        level[head[a]] = level[x] + 1
                        q.append(head[a])
            if level[dst] < 0:
                break
            it = [0] * N

            def push(x: int, f: int) -> int:
                if x == dst:
                    return f
                while it[x] < len(adj[x]):
                    a = adj[x][it[x]]
                    y = head[a]
                    if cap[a] > 0 and level[y] == level[x] + 1:
                        got = push(y, min(f, cap[a]))
                        if got:
                            cap[a] -= got
                            cap[a ^ 1] += got
                            return got
                    it[x] += 1
                return 0

            while push(src, self.inf):
                pass
        seen = {src}
        q = deque([src])
        while q:
            x = q.popleft()
            for a in adj[x]:
                if cap[a] > 0 and head[a] not in seen:
                    seen.add(head[a])
                    q.append(head[a])
        seen.discard(src)
        return seen


class _Solver:
    def __init__(self, G: PlanarGraph):
        self.net = _FlowNetwork(G)
        self.cache: dict[int, Cutset] = {}


_solvers: "weakref.WeakKeyDictionary[PlanarGraph, _Solver]" = weakref.WeakKeyDictionary()


def _solver(G: PlanarGraph) -> _Solver:
    s = _solvers.get(G)
    if s is None:
        s = _solvers[G] = _Solver(G)
    return s


def min_terminal_cut(G: PlanarGraph, S: int) -> Cutset:
    """Unique minimum cutset separating terminal mask ``S`` from the rest."""
    check_subset(G, S)
    key = canonical(S, G.k)
    solver = _solver(G)
    hit = solver.cache.get(key)
    if hit is not None:
        return hit
    src = members(G, key)
    dst = members(G, full_mask(G.k) ^ key)
    side = solver.net.source_side(src, dst)
    cut = frozenset(e for e in range(G.m)
                    if (G.edges[e][0] in side) != (G.edges[e][1] in side))
    result = Cutset(key, cut, base_cost(G, cut), perturbed_cost(G, cut))
    solver.cache[key] = result
    return result


def mincut_value(G: PlanarGraph, S: int) -> int:
    return min_terminal_cut(G, S).cost


def components(G: PlanarGraph, M: Iterable[int]) -> ComponentPartition:
    """Connected components of ``G`` minus edge set ``M``, ordered by lowest vertex."""
    removed = set(M)
    comp = [-1] * G.n
    comps: list[frozenset[int]] = []
    for s in range(G.n):
        if comp[s] >= 0:
            continue
        cid = len(comps)
        comp[s] = cid
        stack, seen = [s], [s]
        while stack:
            v = stack.pop()
            for d in G.rotation[v]:
                if (d >> 1) in removed:
                    continue
                u = G.head(d)
                if comp[u] < 0:
                    comp[u] = cid
                    stack.append(u)
                    seen.append(u)
        comps.append(frozenset(seen))
    masks = tuple(mask_of(G, c) for c in comps)
    return ComponentPartition(tuple(comps), masks)


def boundary(G: PlanarGraph, C: Iterable[int]) -> frozenset[int]:
    """Edges with exactly one endpoint in ``C``."""
    C = set(C)
    return frozenset(e for e, (u, v, _) in enumerate(G.edges) if (u in C) != (v in C))


def separates(G: PlanarGraph, M: Iterable[int], S: int) -> bool:
    """Does removing ``M`` disconnect every terminal of ``S`` from every other terminal?"""
    part = components(G, M)
    full = full_mask(G.k)
    return all((tm & S) == 0 or (tm & (full ^ S)) == 0 for tm in part.terminal_masks)
