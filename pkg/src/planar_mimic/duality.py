"""Reductions between cut sparsifiers and distance-approximating minors.

Both directions need all terminals on the outer face (face cover number 1).

cut -> dam
    Dualize ``G`` and split the dual vertex of the outer face into ``k``
    vertices ``v^i``, one per gap between consecutive terminals ``t_i`` and
    ``t_{i+1}``.  The cut of the interval ``t_i..t_j`` equals the distance
    from ``v^{i-1}`` to ``v^j``.
dam -> cut
    Add an apex joined to every terminal by a zero-weight edge and dualize.
    The faces between consecutive apex edges are the new terminals, and
    ``d(t_i, t_j)`` is the cut of the terminals ``i..j-1``.

Fold-backs invert each construction on a sparsifier of the reduced graph.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass, field

from .dual import build_dual
from .graph import EmbeddingEditor, GraphError, PlanarGraph, outer_terminal_order, \
    terminals_on_outer_face
from .mincut import mincut_value


class ReductionError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class ReducedInstance:
    direction: str               # "cut->dam" or "dam->cut"
    source: PlanarGraph
    graph: PlanarGraph           # G2
    order: tuple[int, ...]       # terminals of the source in outer-face order
    provenance: dict = field(default_factory=dict)


def shortest_distance(G: PlanarGraph, u: int, v: int) -> int:
    dist = {u: 0}
    heap = [(0, u)]
    while heap:
        d, x = heapq.heappop(heap)
        if x == v:
            return d
        if d > dist[x]:
            continue
        for dd in G.rotation[x]:
            y = G.head(dd)
            nd = d + G.weight(dd >> 1)
            if nd < dist.get(y, nd + 1):
                dist[y] = nd
                heapq.heappush(heap, (nd, y))
    raise ReductionError(f"vertex {v} unreachable from {u}")


def terminal_distances(G: PlanarGraph) -> dict[tuple[int, int], int]:
    return {(a, b): shortest_distance(G, G.terminals[a], G.terminals[b])
            for a in range(G.k) for b in range(a + 1, G.k)}


def _require_outer(G: PlanarGraph) -> tuple[int, ...]:
    if G.cover.gamma != 1 or not terminals_on_outer_face(G):
        raise ReductionError("reductions need every terminal on the outer face")
    return outer_terminal_order(G)


def _outer_corners(G: PlanarGraph, order) -> list[int]:
    """Outer-walk position of the first visit to each terminal of ``order``."""
    walk = G.faces[G.outer_face].darts
    first: dict[int, int] = {}
    for p, d in enumerate(walk):
        first.setdefault(G.tail(d), p)
    return [first[t] for t in order]


def interval_mask(G: PlanarGraph, order, i: int, j: int) -> int:
    """Mask of the cyclic interval ``order[i..j]`` in ``G``'s terminal indexing."""
    k = len(order)
    idx = G.terminal_index
    mask = 0
    s = i
    while True:
        mask |= 1 << idx[order[s]]
        if s == j:
            break
        s = (s + 1) % k
    return mask


def intervals(k: int):
    """All proper cyclic intervals ``(i, j)``, each bipartition listed once."""
    for i in range(k):
        for length in range(1, k):
            j = (i + length - 1) % k
            yield i, j


# -- cut -> dam -----------------------------------------------------------------

def cut_to_dam_instance(G: PlanarGraph) -> ReducedInstance:
    order = _require_outer(G)
    k = len(order)
    dual = build_dual(G)
    D = dual.graph
    o = G.outer_face
    walk = G.faces[o].darts
    corners = _outer_corners(G, order)
    gap_of: dict[int, int] = {}
    for i in range(k):
        a, b = corners[i], corners[(i + 1) % k]
        p = a
        while True:
            gap_of[walk[p]] = i
            p = (p + 1) % len(walk)
            if p == b:
                break
    renum = {f: (f if f < o else f - 1) for f in range(D.n) if f != o}
    base = D.n - 1
    edges = []
    for e in range(D.m):
        ends = []
        for d in (2 * e, 2 * e + 1):
            f = D.tail(d)
            ends.append(base + gap_of[d] if f == o else renum[f])
        edges.append((ends[0], ends[1], D.weight(e)))
    rotation = [None] * (base + k)
    for f in range(D.n):
        if f != o:
            rotation[renum[f]] = D.rotation[f]
    split: list[list[int]] = [[] for _ in range(k)]
    for d in D.rotation[o]:
        split[gap_of[d]].append(d)
    for i in range(k):
        # each gap is a contiguous run of the old rotation, so its cyclic order carries over
        rotation[base + i] = tuple(split[i])
    terms = tuple(base + i for i in range(k))
    try:
        G2 = PlanarGraph(base + k, tuple(edges), tuple(rotation), terms)
    except GraphError as exc:
        raise ReductionError(f"split dual is not a connected plane graph: {exc}") from exc
    outer = max((f for f in G2.faces if set(terms) <= f.vertices),
                key=lambda f: (len(f), -f.id)).id
    G2 = PlanarGraph(G2.n, G2.edges, G2.rotation, terms, outer)
    return ReducedInstance("cut->dam", G, G2, order,
                           {"outer_face_vertex": o, "split": terms, "vertex_of_face": renum})


def _terminal_walk_darts(H: PlanarGraph) -> list[int]:
    """For each terminal of ``H`` (which sit on its outer face in index order),
    the outer-walk dart leaving it."""
    walk = H.faces[H.outer_face].darts
    leave: dict[int, int] = {}
    for d in walk:
        leave.setdefault(H.tail(d), d)
    try:
        darts = [leave[t] for t in H.terminals]
    except KeyError as exc:
        raise ReductionError("a terminal is not on the outer face") from exc
    pos = {d: p for p, d in enumerate(walk)}
    seq = [pos[d] for d in darts]
    low = seq.index(min(seq))
    rolled = seq[low:] + seq[:low]
    if rolled != sorted(rolled):
        raise ReductionError("terminals are not in outer-walk order")
    return darts


def _merge_with_apex(H: PlanarGraph, corner_darts: list[int]) -> tuple[EmbeddingEditor, int, list[int]]:
    """Add an apex in the outer face joined to the corner before each dart.

    Returns the editor, the apex id and the new edge ids (weight 0).
    """
    ed = EmbeddingEditor(H)
    apex = ed.add_vertex()
    new = []
    for d in corner_darts:
        v = H.tail(d)
        pos = ed.rot[v].index(d)
        e = ed.insert_edge(apex, 0, v, pos, 0)
        new.append(e)
    # corners are met in walk order; the apex sees them in reverse
    ed.rot[apex] = [2 * e for e in reversed(new)]
    return ed, apex, new


def fold_back_cut(red: ReducedInstance, H2: PlanarGraph) -> PlanarGraph:
    """Merge the split terminals of ``H2`` back together and dualize."""
    if red.direction != "cut->dam":
        raise ReductionError("instance is not a cut->dam reduction")
    G = red.source
    k = len(red.order)
    if H2.k != k:
        raise ReductionError(f"expected {k} terminals, got {H2.k}")
    leave = _terminal_walk_darts(H2)
    ed, apex, new = _merge_with_apex(H2, leave)
    for e in new:
        ed.contract_edge(e)
    merged = min(H2.terminals)  # contraction keeps the lower id
    H1, vmap, emap = ed.freeze()
    # terminal t_i bounds the face that starts where v^{i-1} is left
    faces = []
    for i in range(k):
        d = leave[(i - 1) % k]
        nd = 2 * emap[d >> 1] + (d & 1)
        faces.append(H1.dart_face[nd])
    m_vertex = vmap[merged]
    dual = build_dual(H1, outer_vertex=m_vertex)
    by_order = dict(zip(red.order, faces))
    terms = tuple(by_order[t] for t in G.terminals)
    H = dual.graph
    return PlanarGraph(H.n, H.edges, H.rotation, terms, H.outer_face)


# -- dam -> cut -----------------------------------------------------------------

def dam_to_cut_instance(G: PlanarGraph) -> ReducedInstance:
    order = _require_outer(G)
    k = len(order)
    walk = G.faces[G.outer_face].darts
    corners = _outer_corners(G, order)
    leave = [walk[p] for p in corners]
    ed, apex, new = _merge_with_apex(G, leave)
    G1, vmap, emap = ed.freeze()
    # face between apex edges to t_i and t_{i+1}: holds the walk dart leaving t_i
    tfaces = [G1.dart_face[2 * emap[d >> 1] + (d & 1)] for d in leave]
    dual = build_dual(G1, terminals=tfaces, outer_vertex=vmap[apex])
    G2 = dual.graph
    return ReducedInstance("dam->cut", G, G2, order,
                           {"apex_edges": tuple(emap[e] for e in new), "G1": G1,
                            "apex": vmap[apex]})


def fold_back_dam(red: ReducedInstance, H2: PlanarGraph,
                  edge_origin: tuple[tuple[int, ...], ...] | None = None) -> PlanarGraph:
    """Dualize a cut sparsifier of the dam->cut instance and drop the apex.

    ``edge_origin`` maps each edge of ``H2`` to the ``G2`` edges it came
    from; omit it when ``H2`` keeps ``G2``'s edge ids.
    """
    if red.direction != "dam->cut":
        raise ReductionError("instance is not a dam->cut reduction")
    G = red.source
    apex_ids = red.provenance["apex_edges"]
    if edge_origin is None:
        edge_origin = tuple((e,) for e in range(H2.m))
    owner = {}
    for h, origin in enumerate(edge_origin):
        for e in origin:
            owner[e] = h
    hs = []
    for e in apex_ids:
        h = owner.get(e)
        if h is None or len(edge_origin[h]) != 1:
            raise ReductionError("a zero-weight apex edge was contracted or merged")
        hs.append(h)
    H1 = build_dual(H2).graph
    ends = [set(H1.endpoints(h)) for h in hs]
    common = set.intersection(*ends)
    if len(common) != 1:
        raise ReductionError("apex edges do not share a single endpoint")
    (apex,) = common
    tmap = {}
    for t, h in zip(red.order, hs):
        (other,) = set(H1.endpoints(h)) - {apex}
        tmap[t] = other
    ed = EmbeddingEditor(H1)
    ed.delete_vertex(apex)
    H, _, _ = ed.freeze([tmap[t] for t in G.terminals])
    return H


# -- verification -----------------------------------------------------------------

@dataclass
class EquivalenceReport:
    checked: int = 0
    mismatches: list[tuple[int, int, int, int]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches


def verify_equivalence(G: PlanarGraph, red: ReducedInstance | None = None) -> EquivalenceReport:
    """Interval cuts of ``G`` against distances between split vertices."""
    if red is None:
        red = cut_to_dam_instance(G)
    G2 = red.graph
    k = len(red.order)
    rep = EquivalenceReport()
    for i, j in intervals(k):
        cut = mincut_value(G, interval_mask(G, red.order, i, j))
        dist = shortest_distance(G2, G2.terminals[(i - 1) % k], G2.terminals[j])
        rep.checked += 1
        if cut != dist:
            rep.mismatches.append((i, j, cut, dist))
    return rep


def verify_dam_instance(G: PlanarGraph, red: ReducedInstance | None = None) -> EquivalenceReport:
    """Terminal distances of ``G`` against interval cuts of the dam->cut graph."""
    if red is None:
        red = dam_to_cut_instance(G)
    G2 = red.graph
    k = len(red.order)
    pos = {t: p for p, t in enumerate(red.order)}
    rep = EquivalenceReport()
    for a in range(k):
        for b in range(a + 1, k):
            ta, tb = red.order[a], red.order[b]
            dist = shortest_distance(G, ta, tb)
            mask = sum(1 << s for s in range(pos[ta], pos[tb]))
            cut = mincut_value(G2, mask)
            rep.checked += 1
            if cut != dist:
                rep.mismatches.append((a, b, dist, cut))
    return rep


def check_dam(G: PlanarGraph, H: PlanarGraph, q=1) -> list[tuple[int, int, int, int]]:
    """Terminal pairs violating ``d_G <= d_H <= q d_G``."""
    if G.k != H.k:
        raise ReductionError("terminal counts differ")
    dg, dh = terminal_distances(G), terminal_distances(H)
    return [(a, b, dg[a, b], dh[a, b]) for (a, b) in dg
            if not dg[a, b] <= dh[a, b] <= q * dg[a, b]]
