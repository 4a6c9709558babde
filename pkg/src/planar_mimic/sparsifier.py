"""Minor mimicking networks.

Contract every component of ``G - Ê``, where ``Ê`` is the union of all
elementary cutsets, into one vertex.  The result keeps every minimum
terminal cut value.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass

from .dual import build_dual, subgraph_face_count
from .elementary import ElementaryCatalog, enumerate_elementary
from .graph import EmbeddingEditor, PlanarGraph
from .mincut import components


@dataclass(frozen=True, eq=False)
class MimickingNetwork:
    graph: PlanarGraph
    vertex_map: tuple[int, ...]           # G vertex -> H vertex
    edge_origin: tuple[tuple[int, ...], ...]  # H edge -> merged G edges
    hat_edges: frozenset[int]
    catalog: ElementaryCatalog

    def mapping_lines(self) -> list[str]:
        return [f"{v} {h}" for v, h in enumerate(self.vertex_map)]


def union_elementary(catalog: ElementaryCatalog) -> frozenset[int]:
    out: set[int] = set()
    for c in catalog:
        out |= c.edges
    return frozenset(out)


def contract_blobs(G: PlanarGraph, keep: frozenset[int], merge_parallel: bool = True):
    """Contract each component of ``G - keep``; returns ``(H, vertex map, edge origins)``."""
    ed = EmbeddingEditor(G)
    part = components(G, keep)
    for comp in part.components:
        root = min(comp)
        seen = {root}
        q = deque([root])
        tree = []
        while q:
            v = q.popleft()
            for d in G.rotation[v]:
                e = d >> 1
                u = G.head(d)
                if e not in keep and u not in seen:
                    seen.add(u)
                    tree.append(e)
                    q.append(u)
        for e in tree:
            ed.contract_edge(e)
    for e in range(G.m):
        if e in ed.weight:
            u, v = ed.endpoints(e)
            if u == v:
                ed.delete_edge(e)
    if merge_parallel:
        first: dict[tuple[int, int], int] = {}
        for e in sorted(ed.weight):
            key = tuple(sorted(ed.endpoints(e)))
            if key in first:
                ed.merge_parallel(first[key], e)
            else:
                first[key] = e
    outer = next((d for d in G.faces[G.outer_face].darts if (d >> 1) in ed.weight), None)
    owner = {v: r for r, mem in ed.members.items() for v in mem}
    H, vmap, emap = ed.freeze([owner[t] for t in G.terminals], outer)
    vertex_map = tuple(vmap[owner[v]] for v in range(G.n))
    origin = [()] * H.m
    for e, i in emap.items():
        origin[i] = ed.origin[e]
    return H, vertex_map, tuple(origin)


def build_mimicking(G: PlanarGraph, catalog: ElementaryCatalog | None = None,
                    merge_parallel: bool = True) -> MimickingNetwork:
    if catalog is None:
        catalog = enumerate_elementary(G)
    hat = union_elementary(catalog)
    H, vmap, origin = contract_blobs(G, hat, merge_parallel)
    return MimickingNetwork(H, vmap, origin, hat, catalog)


def _pairs(catalog: ElementaryCatalog):
    return itertools.combinations_with_replacement(catalog.entries, 2)


def alpha(G: PlanarGraph, catalog: ElementaryCatalog) -> int:
    """Largest component count of ``G - (E_S | E_S')`` over elementary pairs."""
    return max((len(components(G, a.edges | b.edges)) for a, b in _pairs(catalog)), default=0)


@dataclass
class MeetingStats:
    pair_meeting: dict[tuple[int, int], int]
    pair_components: dict[tuple[int, int], int]
    alpha: int
    hat_faces: int
    blob_count: int

    @property
    def max_meeting(self) -> int:
        return max(self.pair_meeting.values(), default=0)

    @property
    def consistent(self) -> bool:
        return self.hat_faces == self.blob_count


def meeting_vertices(G: PlanarGraph, edge_ids) -> int:
    """Dual vertices (primal faces) of degree at least 3 in the dual of ``edge_ids``."""
    deg: dict[int, int] = {}
    for e in edge_ids:
        for d in (2 * e, 2 * e + 1):
            f = G.dart_face[d]
            deg[f] = deg.get(f, 0) + 1
    return sum(1 for x in deg.values() if x >= 3)


def meeting_vertex_stats(G: PlanarGraph, catalog: ElementaryCatalog) -> MeetingStats:
    meet, comps = {}, {}
    for a, b in _pairs(catalog):
        key = (a.mask, b.mask)
        union = a.edges | b.edges
        meet[key] = meeting_vertices(G, union)
        comps[key] = len(components(G, union))
    hat = union_elementary(catalog)
    D = build_dual(G).graph
    faces, _, _ = subgraph_face_count(D, hat)
    return MeetingStats(meet, comps, max(comps.values(), default=0), faces,
                        len(components(G, hat)))


def size_report(G: PlanarGraph, net: MimickingNetwork, a: int | None = None) -> dict:
    """|V(H)| against each size bound expression, reported as ratios."""
    k = G.k
    gamma = G.cover.gamma
    te = len(net.catalog)
    if a is None:
        a = alpha(G, net.catalog)
    size = net.graph.n
    bounds = {
        "alpha*Te^2": a * te * te,
        "k*2^(2k)": k * 4 ** k,
        "gamma*2^(2gamma)*k^4": gamma * 4 ** gamma * k ** 4,
    }
    if gamma == 1:
        bounds["k^4"] = k ** 4
    return {
        "n_G": G.n,
        "n_H": size,
        "m_H": net.graph.m,
        "k": k,
        "gamma": gamma,
        "Te": te,
        "alpha": a,
        "zero_weight_edges": sum(1 for _, _, w in G.edges if w == 0),
        "bounds": bounds,
        "ratios": {name: size / b for name, b in bounds.items()},
    }
