"""Parity of dual faces and the fragment labels for bounded face-cover instances.

``W`` is the set of dual vertices of the cover faces.  Elementary dual
cycles are split at ``W`` into fragments; each fragment gets a label
``(ends, gaps, signature)`` and no two fragments may share one.

Dual vertex ids are primal face ids and dual edge ids are primal edge ids,
so a circuit is simply a ``{edge id: multiplicity}`` mapping.
"""
from __future__ import annotations

import heapq
import random
from collections import Counter, deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .dual import build_dual
from .elementary import ElementaryCatalog, enumerate_elementary
from .graph import PlanarGraph
from .mincut import full_mask, min_terminal_cut, perturbed_weight


class LabelError(AssertionError):
    """A label invariant failed (duplicate label, non-blockwise parity, ...)."""


class NoConnector(ValueError):
    pass


@dataclass(frozen=True)
class Label:
    ends: tuple[int, int]       # cover indices (i, j)
    gaps: tuple[int, int]       # gap x at face i, gap y at face j
    signature: int              # bit r set iff block r is odd

    def format(self) -> str:
        return f"{self.ends[0]},{self.ends[1]} {self.gaps[0]},{self.gaps[1]} {self.signature:b}"


@dataclass(frozen=True)
class PathFragment:
    ends: tuple[int, int]
    gaps: tuple[int, int]
    darts: tuple[int, ...]      # dual darts, oriented from ends[0] to ends[1]
    cost: int

    @property
    def edges(self) -> tuple[int, ...]:
        return tuple(d >> 1 for d in self.darts)

    @property
    def key(self) -> tuple[int, ...]:
        e = self.edges
        return min(e, e[::-1])


@dataclass(frozen=True)
class WholeCycle:
    edges: frozenset[int]
    signature: int
    boundary_edges: int
    cost: int


@dataclass(frozen=True)
class NaiveLabel:
    x: tuple[int, ...]
    y: tuple[int, ...]


@dataclass
class FragmentPool:
    fragments: list[PathFragment] = field(default_factory=list)
    labels: list[Label] = field(default_factory=list)
    sources: list[list[int]] = field(default_factory=list)
    cycles: list[WholeCycle] = field(default_factory=list)
    cycle_sources: list[list[int]] = field(default_factory=list)
    # per elementary mask: indices into fragments, or ("cycle", index)
    members: dict[int, tuple] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.fragments) + len(self.cycles)

    def edge_set(self, S: int) -> list[frozenset[int]]:
        kind, idx = self.members[S]
        if kind == "cycle":
            return [self.cycles[idx].edges]
        return [frozenset(self.fragments[i].edges) for i in idx]


class ParityContext:
    """Fixed paths to ``v_inf`` plus the cover structure used by labels."""

    def __init__(self, G: PlanarGraph, catalog: ElementaryCatalog | None = None):
        self.G = G
        self.catalog = catalog if catalog is not None else enumerate_elementary(G)
        self.v_inf = min(G.faces[G.outer_face].vertices)
        self.dual = build_dual(G, outer_vertex=self.v_inf).graph
        self.cover = G.cover
        self.W = tuple(self.cover.faces)
        self.w_index = {f: i for i, f in enumerate(self.W)}
        # BFS tree rooted at v_inf
        parent_edge = [-1] * G.n
        parent = [-1] * G.n
        order = [self.v_inf]
        seen = {self.v_inf}
        q = deque([self.v_inf])
        while q:
            v = q.popleft()
            for u, e in sorted((G.head(d), d >> 1) for d in G.rotation[v]):
                if u not in seen:
                    seen.add(u)
                    parent[u] = v
                    parent_edge[u] = e
                    order.append(u)
                    q.append(u)
        self.parent = parent
        self.parent_edge = parent_edge
        self.bfs_order = order
        # terminal occurrences along each cover face walk: (position, block index)
        self.occurrences: list[list[tuple[int, int]]] = []
        for f, block in zip(self.W, self.cover.assignment):
            where = {t: x for x, t in enumerate(block)}
            occ = [(p, where[G.tail(d)]) for p, d in enumerate(G.faces[f].darts)
                   if G.tail(d) in where]
            self.occurrences.append(occ)
        self.position = {d: p for f in self.W for p, d in enumerate(G.faces[f].darts)}
        self._connectors: dict[tuple, tuple[int, ...]] = {}

    @property
    def block_sizes(self) -> tuple[int, ...]:
        return tuple(len(b) for b in self.cover.assignment)

    def phi(self, v: int) -> list[int]:
        """Edge ids of the fixed path from ``v`` to ``v_inf``."""
        out = []
        while v != self.v_inf:
            out.append(self.parent_edge[v])
            v = self.parent[v]
        return out

    def parities(self, circuit: Mapping[int, int]) -> list[int]:
        par = [0] * self.G.n
        for v in self.bfs_order[1:]:
            par[v] = par[self.parent[v]] ^ (circuit.get(self.parent_edge[v], 0) & 1)
        return par

    def gap(self, dart: int) -> tuple[int, int]:
        """``(cover index, gap)`` of a dual dart leaving a cover vertex."""
        f = self.G.dart_face[dart]
        i = self.w_index[f]
        p = self.position[dart]
        occ = self.occurrences[i]
        best = occ[-1][1]
        for q, x in occ:
            if q <= p:
                best = x
        return i, best


def parity(ctx: ParityContext, v: int, circuit: Mapping[int, int]) -> int:
    return sum(circuit.get(e, 0) for e in ctx.phi(v)) & 1


def path_parity(path_edges: Iterable[int], circuit: Mapping[int, int]) -> int:
    return sum(circuit.get(e, 0) for e in path_edges) & 1


def circuit_of(*parts: Iterable[int]) -> Counter:
    c: Counter = Counter()
    for p in parts:
        c.update(p)
    return c


def odd_terminals(ctx: ParityContext, circuit: Mapping[int, int]) -> int:
    """Mask of terminals whose dual face has odd parity."""
    par = ctx.parities(circuit)
    return sum(1 << i for i, t in enumerate(ctx.G.terminals) if par[t])


def block_signature(ctx: ParityContext, odd_mask: int) -> int:
    """Compress an odd-terminal mask to one bit per cover block."""
    idx = ctx.G.terminal_index
    sig = 0
    for r, block in enumerate(ctx.cover.assignment):
        bits = {odd_mask >> idx[t] & 1 for t in block}
        if len(bits) != 1:
            raise LabelError(f"block {r} has mixed parity")
        if bits == {1}:
            sig |= 1 << r
    return sig


def random_simple_path(G: PlanarGraph, source: int, target: int, rng: random.Random,
                       blocked: frozenset[int] = frozenset()) -> list[int]:
    """Edge ids of a loop-erased random walk from ``source`` to ``target``.

    Vertices in ``blocked`` (other than the endpoints) are never entered.
    """
    if source == target:
        return []
    walk_v = [source]
    walk_e: list[int] = []
    index = {source: 0}
    v = source
    while v != target:
        opts = [d for d in G.rotation[v]
                if G.head(d) == target or G.head(d) not in blocked]
        d = rng.choice(opts)
        u = G.head(d)
        if u in index:
            cut = index[u]
            for w in walk_v[cut + 1:]:
                del index[w]
            walk_v = walk_v[:cut + 1]
            walk_e = walk_e[:cut]
        else:
            index[u] = len(walk_v)
            walk_v.append(u)
            walk_e.append(d >> 1)
        v = u
    return walk_e


def _cycle_darts(ctx: ParityContext, edges: frozenset[int]) -> list[int]:
    """Walk a simple dual cycle, starting at its lowest-indexed cover vertex."""
    G = ctx.G
    at: dict[int, list[int]] = {}
    for e in edges:
        for d in (2 * e, 2 * e + 1):
            at.setdefault(G.dart_face[d], []).append(d)
    if any(len(ds) != 2 for ds in at.values()):
        raise LabelError("dual cutset is not a simple cycle")
    visited_w = [f for f in ctx.W if f in at]
    start = visited_w[0] if visited_w else min(at)
    d0 = min(at[start])
    out = [d0]
    d = d0
    while True:
        here = G.dart_face[d ^ 1]
        a, b = at[here]
        nxt = b if a == d ^ 1 else a
        if nxt == d0:
            break
        out.append(nxt)
        d = nxt
    return out


def _orient(ctx: ParityContext, darts: list[int]) -> PathFragment:
    G = ctx.G
    i, x = ctx.gap(darts[0])
    j, y = ctx.gap(darts[-1] ^ 1)
    back = [d ^ 1 for d in reversed(darts)]
    fwd_key = (i, x, j, y, tuple(d >> 1 for d in darts))
    rev_key = (j, y, i, x, tuple(d >> 1 for d in back))
    cost = sum(perturbed_weight(G, d >> 1) for d in darts)
    if rev_key < fwd_key:
        return PathFragment((j, i), (y, x), tuple(back), cost)
    return PathFragment((i, j), (x, y), tuple(darts), cost)


def fragment_cycle(ctx: ParityContext, S: int):
    """Split ``E*_S`` at ``W``.

    Returns ``(fragments, whole)`` where ``whole`` is the cycle's edge set
    when it avoids ``W`` (and ``fragments`` is then empty).
    """
    G = ctx.G
    cut = min_terminal_cut(G, S)
    if ctx.catalog.lookup(S) is None:
        raise LabelError(f"{S:#x} is not elementary")
    darts = _cycle_darts(ctx, cut.edges)
    cover_v = set(ctx.W)
    cuts = [p for p, d in enumerate(darts) if G.dart_face[d] in cover_v]
    if not cuts:
        return [], cut.edges
    frags = []
    for a, b in zip(cuts, cuts[1:] + [cuts[0] + len(darts)]):
        piece = [darts[p % len(darts)] for p in range(a, b)]
        frags.append(_orient(ctx, piece))
    return frags, None


def boundary_edge_count(ctx: ParityContext, edges: Iterable[int]) -> int:
    """Edges lying on the boundary of some cover face."""
    cover_v = set(ctx.W)
    G = ctx.G
    return sum(1 for e in set(edges)
               if G.dart_face[2 * e] in cover_v or G.dart_face[2 * e + 1] in cover_v)


def canonical_connector(ctx: ParityContext, ends: tuple[int, int],
                        gaps: tuple[int, int]) -> tuple[int, ...]:
    """Cheapest dual path between ``w_i`` and ``w_j`` leaving and entering through
    the given gaps, with no other cover vertex on it.  Returns dual darts."""
    key = (ends, gaps)
    hit = ctx._connectors.get(key)
    if hit is not None:
        return hit
    G = ctx.G
    wi, wj = ctx.W[ends[0]], ctx.W[ends[1]]
    cover_v = set(ctx.W)

    def face_darts(f: int) -> list[int]:
        return list(G.faces[f].darts)

    starts = [d for d in face_darts(wi) if ctx.gap(d) == (ends[0], gaps[0])]
    best: tuple[int, tuple[int, ...]] | None = None
    for s in starts:
        es = s >> 1
        first = G.dart_face[s ^ 1]
        if first in cover_v:
            if first == wj and ctx.gap(s ^ 1) == (ends[1], gaps[1]):
                c = perturbed_weight(G, es)
                if best is None or c < best[0]:
                    best = (c, (s,))
            continue
        dist = {first: perturbed_weight(G, es)}
        via: dict[int, int] = {}
        heap = [(dist[first], first)]
        while heap:
            dv, v = heapq.heappop(heap)
            if dv > dist[v]:
                continue
            for d in G.faces[v].darts:
                u = G.dart_face[d ^ 1]
                if u in cover_v:
                    continue
                nd = dv + perturbed_weight(G, d >> 1)
                if nd < dist.get(u, nd + 1):
                    dist[u] = nd
                    via[u] = d
                    heapq.heappush(heap, (nd, u))
        for v, dv in dist.items():
            for d in G.faces[v].darts:
                if G.dart_face[d ^ 1] != wj or (d >> 1) == es:
                    continue
                if ctx.gap(d ^ 1) != (ends[1], gaps[1]):
                    continue
                c = dv + perturbed_weight(G, d >> 1)
                if best is None or c < best[0]:
                    path = [d]
                    x = v
                    while x != first:
                        path.append(via[x])
                        x = G.dart_face[via[x]]
                    path.append(s)
                    best = (c, tuple(reversed(path)))
    if best is None:
        raise NoConnector(f"no connector for ends {ends} gaps {gaps}")
    ctx._connectors[key] = best[1]
    return best[1]


def label(ctx: ParityContext, frag: PathFragment) -> Label:
    conn = canonical_connector(ctx, frag.ends, frag.gaps)
    odd = odd_terminals(ctx, circuit_of(frag.edges, (d >> 1 for d in conn)))
    return Label(frag.ends, frag.gaps, block_signature(ctx, odd))


def collect_fragments(ctx: ParityContext) -> FragmentPool:
    pool = FragmentPool()
    seen: dict[tuple[int, ...], int] = {}
    seen_cycle: dict[frozenset[int], int] = {}
    by_label: dict[Label, int] = {}
    for entry in ctx.catalog:
        S = entry.mask
        frags, whole = fragment_cycle(ctx, S)
        if whole is not None:
            idx = seen_cycle.get(whole)
            if idx is None:
                odd = odd_terminals(ctx, circuit_of(whole))
                idx = seen_cycle[whole] = len(pool.cycles)
                pool.cycles.append(WholeCycle(whole, block_signature(ctx, odd),
                                              boundary_edge_count(ctx, whole), entry.perturbed))
                pool.cycle_sources.append([])
            pool.cycle_sources[idx].append(S)
            pool.members[S] = ("cycle", idx)
            continue
        ids = []
        for fr in frags:
            idx = seen.get(fr.key)
            if idx is None:
                lab = label(ctx, fr)
                if lab in by_label:
                    other = pool.fragments[by_label[lab]]
                    raise LabelError(f"fragments {other.edges} and {fr.edges} share label {lab}")
                idx = seen[fr.key] = len(pool.fragments)
                by_label[lab] = idx
                pool.fragments.append(fr)
                pool.labels.append(lab)
                pool.sources.append([])
            pool.sources[idx].append(S)
            ids.append(idx)
        pool.members[S] = ("paths", tuple(ids))
    return pool


def pool_bound(ctx: ParityContext) -> int:
    ks = ctx.block_sizes
    return 2 ** len(ks) * (1 + sum(a * b for a in ks for b in ks))


def naive_bound(ctx: ParityContext) -> int:
    out = 4 ** len(ctx.block_sizes)
    for k in ctx.block_sizes:
        out *= k * k
    return out


def naive_label(ctx: ParityContext, S: int) -> NaiveLabel:
    """Per cover face, the arc ``x..y-1`` of its terminals that lies in ``S``."""
    G = ctx.G
    cut = min_terminal_cut(G, S)
    mask = cut.mask
    idx = G.terminal_index
    xs, ys = [], []
    for i, f in enumerate(ctx.W):
        block = ctx.cover.assignment[i]
        ki = len(block)
        at = [d for e in cut.edges for d in (2 * e, 2 * e + 1) if G.dart_face[d] == f]
        if not at:
            xs.append(0)
            ys.append(0)
            continue
        if len(at) != 2:
            raise LabelError(f"cycle meets cover face {i} {len(at)} times")
        (_, ga), (_, gb) = (ctx.gap(d) for d in at)
        if ga == gb:
            xs.append((ga + 1) % ki)
            ys.append((ga + 1) % ki)
            continue
        arc = [(ga + 1 + s) % ki for s in range((gb - ga) % ki)]
        inside = {mask >> idx[block[a]] & 1 for a in arc}
        rest = {mask >> idx[block[a]] & 1 for a in range(ki) if a not in arc}
        if len(inside) != 1 or len(rest) != 1 or inside == rest:
            raise LabelError(f"cover face {i} arcs do not split by side")
        if inside == {1}:
            xs.append((ga + 1) % ki)
            ys.append((gb + 1) % ki)
        else:
            xs.append((gb + 1) % ki)
            ys.append((ga + 1) % ki)
    return NaiveLabel(tuple(xs), tuple(ys))
