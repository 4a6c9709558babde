"""Embedded planar multigraphs.

A graph is stored as a rotation system over *darts*.  Edge ``e`` with
endpoints ``(u, v)`` owns dart ``2*e`` (tail ``u``) and dart ``2*e + 1``
(tail ``v``).  ``rotation[v]`` lists the darts leaving ``v`` in clockwise
order.  Faces are the orbits of ``d -> succ(rev(d))``, which keeps the face
on the left of every dart, so the outer face walk runs clockwise around the
drawing.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence


class GraphError(ValueError):
    """Malformed input or an invalid embedding."""


def rev(d: int) -> int:
    return d ^ 1


@dataclass(frozen=True)
class Face:
    id: int
    darts: tuple[int, ...]
    vertices: frozenset[int]

    @property
    def walk(self) -> tuple[tuple[int, int], ...]:
        """Boundary walk as ``(edge id, direction)`` pairs; direction 0 is u->v."""
        return tuple((d >> 1, d & 1) for d in self.darts)

    def __len__(self) -> int:
        return len(self.darts)


@dataclass(frozen=True)
class Interval:
    start: int
    end: int
    vertices: tuple[int, ...]


@dataclass(frozen=True)
class FaceCover:
    gamma: int
    faces: tuple[int, ...]
    # terminals assigned to each cover face, in that face's clockwise order
    assignment: tuple[tuple[int, ...], ...]

    def block_of(self, t: int) -> int:
        for r, block in enumerate(self.assignment):
            if t in block:
                return r
        raise KeyError(t)


@dataclass(frozen=True, eq=False)
class PlanarGraph:
    n: int
    edges: tuple[tuple[int, int, int], ...]
    rotation: tuple[tuple[int, ...], ...]
    terminals: tuple[int, ...] = ()
    declared_outer: int | None = None
    declared_cover: tuple[int, ...] | None = None
    declared_assignment: tuple[tuple[int, ...], ...] | None = None

    def __post_init__(self) -> None:
        self._validate()

    # -- basic accessors -------------------------------------------------

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def k(self) -> int:
        return len(self.terminals)

    def tail(self, d: int) -> int:
        return self.edges[d >> 1][d & 1]

    def head(self, d: int) -> int:
        return self.edges[d >> 1][1 - (d & 1)]

    def weight(self, e: int) -> int:
        return self.edges[e][2]

    def endpoints(self, e: int) -> tuple[int, int]:
        u, v, _ = self.edges[e]
        return u, v

    def incident_edges(self, v: int) -> tuple[int, ...]:
        return tuple(d >> 1 for d in self.rotation[v])

    def neighbors(self, v: int) -> list[tuple[int, int]]:
        """``(neighbor, edge id)`` pairs in rotation order."""
        return [(self.head(d), d >> 1) for d in self.rotation[v]]

    @cached_property
    def terminal_index(self) -> dict[int, int]:
        return {t: i for i, t in enumerate(self.terminals)}

    # -- validation ------------------------------------------------------

    def _validate(self) -> None:
        n, m = self.n, self.m
        if n < 1:
            raise GraphError("graph needs at least one vertex")
        if len(self.rotation) != n:
            raise GraphError(f"expected {n} rotation lists, got {len(self.rotation)}")
        for e, (u, v, w) in enumerate(self.edges):
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge {e} has endpoint out of range")
            if w < 0 or w > 2**32:
                raise GraphError(f"edge {e} weight {w} outside [0, 2^32]")
        seen = [False] * (2 * m)
        for v, rot in enumerate(self.rotation):
            for d in rot:
                if not 0 <= d < 2 * m:
                    raise GraphError(f"rotation at {v} names unknown dart {d}")
                if seen[d]:
                    raise GraphError(f"rotation is not a permutation: dart {d} repeated")
                if self.tail(d) != v:
                    raise GraphError(f"rotation at {v} lists edge {d >> 1} which is not incident")
                seen[d] = True
        if not all(seen):
            missing = seen.index(False)
            raise GraphError(f"rotation is not a permutation: edge {missing >> 1} missing")
        if not self.is_connected():
            raise GraphError("graph is disconnected")
        if n - m + len(self.faces) != 2:
            raise GraphError(
                f"Euler check failed: V-E+F = {n}-{m}+{len(self.faces)} != 2 "
                "(non-planar rotation system)")
        if len(set(self.terminals)) != len(self.terminals):
            raise GraphError("duplicate terminal")
        for t in self.terminals:
            if not 0 <= t < n:
                raise GraphError(f"terminal {t} out of range")
        if self.declared_outer is not None and not 0 <= self.declared_outer < len(self.faces):
            raise GraphError(f"outer face {self.declared_outer} does not exist")
        if self.declared_cover is not None:
            self._check_cover(self.declared_cover, self.declared_assignment)

    def _check_cover(self, cover, assignment) -> None:
        if any(not 0 <= f < len(self.faces) for f in cover):
            raise GraphError("face cover names a face that does not exist")
        if assignment is None or len(assignment) != len(cover):
            raise GraphError("face cover needs one terminal assignment per face")
        flat = [t for block in assignment for t in block]
        if sorted(flat) != sorted(self.terminals):
            raise GraphError("face assignment is not a partition of the terminals")
        for f, block in zip(cover, assignment):
            for t in block:
                if t not in self.faces[f].vertices:
                    raise GraphError(f"terminal {t} is not incident to cover face {f}")

    def is_connected(self) -> bool:
        seen = {0}
        stack = [0]
        while stack:
            v = stack.pop()
            for d in self.rotation[v]:
                u = self.head(d)
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
        return len(seen) == self.n

    # -- faces -----------------------------------------------------------

    @cached_property
    def succ(self) -> tuple[int, ...]:
        """Clockwise successor of each dart around its tail."""
        out = [0] * (2 * self.m)
        for rot in self.rotation:
            for i, d in enumerate(rot):
                out[d] = rot[(i + 1) % len(rot)]
        return tuple(out)

    def next_in_face(self, d: int) -> int:
        return self.succ[d ^ 1]

    @cached_property
    def _face_data(self) -> tuple[tuple[Face, ...], tuple[int, ...]]:
        if self.m == 0:
            return (Face(0, (), frozenset(range(self.n))),), ()
        dart_face = [-1] * (2 * self.m)
        faces = []
        for start in range(2 * self.m):
            if dart_face[start] != -1:
                continue
            fid = len(faces)
            walk = []
            d = start
            while dart_face[d] == -1:
                dart_face[d] = fid
                walk.append(d)
                d = self.next_in_face(d)
            faces.append(Face(fid, tuple(walk), frozenset(self.tail(x) for x in walk)))
        return tuple(faces), tuple(dart_face)

    @property
    def faces(self) -> tuple[Face, ...]:
        return self._face_data[0]

    @property
    def dart_face(self) -> tuple[int, ...]:
        return self._face_data[1]

    @cached_property
    def outer_face(self) -> int:
        if self.declared_outer is not None:
            return self.declared_outer
        return max(self.faces, key=lambda f: (len(f), -f.id)).id

    def face_of_dart(self, d: int) -> int:
        return self.dart_face[d]

    @cached_property
    def cover(self) -> FaceCover:
        return face_cover(self)

    def with_terminals(self, terminals: Sequence[int]) -> "PlanarGraph":
        return PlanarGraph(self.n, self.edges, self.rotation, tuple(terminals),
                           self.declared_outer)

    def __repr__(self) -> str:
        return f"PlanarGraph(n={self.n}, m={self.m}, k={self.k}, F={len(self.faces)})"


def trace_faces(G: PlanarGraph) -> list[Face]:
    return list(G.faces)


def from_edge_rotations(n: int, edges: Sequence[tuple[int, int, int]],
                        rot_edges: Sequence[Sequence[int]], **kw) -> PlanarGraph:
    """Build a graph from rotations given as edge ids (the file convention).

    At a self-loop the first listed occurrence is dart ``2e``.
    """
    rotation = []
    for v, ids in enumerate(rot_edges):
        darts = []
        loop_seen: set[int] = set()
        for e in ids:
            if not 0 <= e < len(edges):
                raise GraphError(f"rotation at {v} names unknown edge {e}")
            u, w, _ = edges[e]
            if u == w:
                darts.append(2 * e + (1 if e in loop_seen else 0))
                loop_seen.add(e)
            elif v == u:
                darts.append(2 * e)
            elif v == w:
                darts.append(2 * e + 1)
            else:
                raise GraphError(f"rotation at {v} lists edge {e} which is not incident")
        rotation.append(tuple(darts))
    return PlanarGraph(n, tuple(tuple(e) for e in edges), tuple(rotation), **kw)


# -- face cover ------------------------------------------------------------

def face_terminal_order(G: PlanarGraph, face: int, terms: Iterable[int]) -> tuple[int, ...]:
    """Terminals of ``terms`` in boundary-walk order of ``face``, starting at the lowest id."""
    wanted = set(terms)
    order: list[int] = []
    for d in G.faces[face].darts:
        v = G.tail(d)
        if v in wanted and v not in order:
            order.append(v)
    if not order and wanted and G.m == 0:
        order = sorted(wanted)
    if set(order) != wanted:
        raise GraphError(f"terminals {sorted(wanted - set(order))} not on face {face}")
    i = order.index(min(order))
    return tuple(order[i:] + order[:i])


def face_cover(G: PlanarGraph) -> FaceCover:
    """Minimum set of faces jointly incident to all terminals.

    A declared cover is validated and returned as is.  Otherwise faces that
    touch a terminal are searched exhaustively by increasing size; the
    lexicographically smallest id tuple wins.  Each terminal goes to the
    first cover face it touches.
    """
    terms = set(G.terminals)
    if G.declared_cover is not None:
        cover = tuple(G.declared_cover)
        blocks = tuple(face_terminal_order(G, f, b)
                       for f, b in zip(cover, G.declared_assignment))
        return FaceCover(len(cover), cover, blocks)
    if not terms:
        return FaceCover(0, (), ())
    candidates = [f.id for f in G.faces if f.vertices & terms]
    for size in range(1, len(candidates) + 1):
        for combo in itertools.combinations(candidates, size):
            if set().union(*(G.faces[f].vertices & terms for f in combo)) == terms:
                blocks = []
                left = set(terms)
                for f in combo:
                    mine = G.faces[f].vertices & left
                    left -= mine
                    blocks.append(face_terminal_order(G, f, mine))
                return FaceCover(size, combo, tuple(blocks))
    raise AssertionError("every terminal lies on some face")


# -- outer face helpers ------------------------------------------------------

def terminals_on_outer_face(G: PlanarGraph) -> bool:
    return set(G.terminals) <= G.faces[G.outer_face].vertices


def outer_terminal_order(G: PlanarGraph) -> tuple[int, ...]:
    """Terminal vertices in clockwise outer-face order, lowest id first."""
    if not terminals_on_outer_face(G):
        missing = set(G.terminals) - G.faces[G.outer_face].vertices
        raise GraphError(f"terminals {sorted(missing)} are not on the outer face")
    return face_terminal_order(G, G.outer_face, G.terminals)


def outer_cycle(G: PlanarGraph) -> tuple[int, ...]:
    return tuple(G.tail(d) for d in G.faces[G.outer_face].darts)


def maximal_intervals(G: PlanarGraph, W: Iterable[int]) -> list[Interval]:
    """Maximal runs of the outer-face walk whose vertices all lie in ``W``.

    Indices refer to positions in the outer boundary walk; an interval may
    wrap around the end of the walk.
    """
    W = set(W)
    seq = outer_cycle(G)
    if not seq:
        seq = (0,)
    L = len(seq)
    inside = [v in W for v in seq]
    if all(inside):
        return [Interval(0, L - 1, seq)]
    if not any(inside):
        return []
    first_out = inside.index(False)
    out: list[Interval] = []
    run: list[int] = []
    for step in range(1, L + 1):
        p = (first_out + step) % L
        if inside[p]:
            run.append(p)
        elif run:
            out.append(Interval(run[0], run[-1], tuple(seq[q] for q in run)))
            run = []
    if run:
        out.append(Interval(run[0], run[-1], tuple(seq[q] for q in run)))
    return sorted(out, key=lambda iv: iv.start)


# -- isomorphism -------------------------------------------------------------

def same_embedding(G: PlanarGraph, H: PlanarGraph, check_weights: bool = True) -> bool:
    """True when ``H`` equals ``G`` up to vertex renaming and edge reorientation.

    Edge ids must correspond; rotations must agree as cyclic orders.
    """
    if G.n != H.n or G.m != H.m:
        return False
    if check_weights and any(G.weight(e) != H.weight(e) for e in range(G.m)):
        return False
    if G.m == 0:
        return True
    for flip0 in (0, 1):
        dmap = {0: flip0}
        stack = [0]
        ok = True
        while stack and ok:
            d = stack.pop()
            img = dmap[d]
            for a, b in ((d ^ 1, img ^ 1), (G.succ[d], H.succ[img])):
                if (a >> 1) != (b >> 1):
                    ok = False
                    break
                if a in dmap:
                    if dmap[a] != b:
                        ok = False
                        break
                else:
                    dmap[a] = b
                    stack.append(a)
        if ok and len(dmap) == 2 * G.m:
            vmap: dict[int, int] = {}
            for d, img in dmap.items():
                if vmap.setdefault(G.tail(d), H.tail(img)) != H.tail(img):
                    break
            else:
                if len(set(vmap.values())) == len(vmap) == G.n:
                    return True
    return False


# -- embedding editor ---------------------------------------------------------

class EmbeddingEditor:
    """Mutable copy of an embedding supporting minor operations.

    Edge ids stay stable until :meth:`freeze`, which renumbers vertices and
    edges by their current ids.
    """

    def __init__(self, G: PlanarGraph):
        self.tail: dict[int, int] = {d: G.tail(d) for d in range(2 * G.m)}
        self.weight: dict[int, int] = {e: G.weight(e) for e in range(G.m)}
        self.rot: dict[int, list[int]] = {v: list(G.rotation[v]) for v in range(G.n)}
        self.origin: dict[int, tuple[int, ...]] = {e: (e,) for e in range(G.m)}
        self.members: dict[int, set[int]] = {v: {v} for v in range(G.n)}
        self._next_edge = G.m
        self._next_vertex = G.n

    def endpoints(self, e: int) -> tuple[int, int]:
        return self.tail[2 * e], self.tail[2 * e + 1]

    def add_vertex(self) -> int:
        v = self._next_vertex
        self._next_vertex += 1
        self.rot[v] = []
        self.members[v] = set()
        return v

    def insert_edge(self, u: int, pos_u: int, v: int, pos_v: int, w: int,
                    eid: int | None = None) -> int:
        """Add edge u-v, placing its darts at list positions ``pos_u``/``pos_v``."""
        e = self._next_edge if eid is None else eid
        self._next_edge = max(self._next_edge, e + 1)
        self.tail[2 * e] = u
        self.tail[2 * e + 1] = v
        self.weight[e] = w
        self.origin[e] = ()
        self.rot[u].insert(pos_u, 2 * e)
        self.rot[v].insert(pos_v, 2 * e + 1)
        return e

    def delete_edge(self, e: int) -> None:
        for d in (2 * e, 2 * e + 1):
            self.rot[self.tail[d]].remove(d)
            del self.tail[d]
        del self.weight[e]
        del self.origin[e]

    def merge_parallel(self, keep: int, drop: int) -> None:
        self.weight[keep] += self.weight[drop]
        self.origin[keep] = tuple(sorted(self.origin[keep] + self.origin[drop]))
        self.delete_edge(drop)

    def contract_edge(self, e: int) -> int:
        """Contract non-loop edge ``e``; the lower-id endpoint survives."""
        u, v = self.endpoints(e)
        if u == v:
            raise GraphError(f"cannot contract self-loop {e}")
        du, dv = (2 * e, 2 * e + 1)
        if v < u:
            u, v, du, dv = v, u, dv, du
        ru, rv = self.rot[u], self.rot[v]
        j = rv.index(dv)
        spliced = rv[j + 1:] + rv[:j]
        i = ru.index(du)
        self.rot[u] = ru[:i] + spliced + ru[i + 1:]
        for d in rv:
            self.tail[d] = u
        del self.rot[v]
        self.members[u] |= self.members.pop(v)
        del self.tail[du], self.tail[dv]
        del self.weight[e], self.origin[e]
        return u

    def delete_vertex(self, v: int) -> None:
        for d in list(self.rot[v]):
            if d in self.tail:
                self.delete_edge(d >> 1)
        del self.rot[v]
        del self.members[v]

    def freeze(self, terminals: Sequence[int] = (), outer_dart: int | None = None,
               ) -> tuple[PlanarGraph, dict[int, int], dict[int, int]]:
        """Return ``(graph, vertex renumbering, edge renumbering)``.

        ``terminals`` and ``outer_dart`` use current (pre-freeze) ids; the
        outer face of the result is the face containing ``outer_dart``.
        """
        vmap = {v: i for i, v in enumerate(sorted(self.rot))}
        emap = {e: i for i, e in enumerate(sorted(self.weight))}
        edges = []
        for e in sorted(self.weight):
            edges.append((vmap[self.tail[2 * e]], vmap[self.tail[2 * e + 1]], self.weight[e]))
        rotation = []
        for v in sorted(self.rot):
            rotation.append(tuple(2 * emap[d >> 1] + (d & 1) for d in self.rot[v]))
        G = PlanarGraph(len(vmap), tuple(edges), tuple(rotation),
                        tuple(vmap[t] for t in terminals))
        if outer_dart is not None:
            nd = 2 * emap[outer_dart >> 1] + (outer_dart & 1)
            G = PlanarGraph(G.n, G.edges, G.rotation, G.terminals, G.dart_face[nd])
        return G, vmap, emap


def normalized(G: PlanarGraph) -> PlanarGraph:
    """Relabel self-loop darts so that the first listed occurrence is ``2e``.

    Needed before writing a graph in the edge-id file format; face ids are
    re-resolved through representative darts.
    """
    swap = set()
    for rot in G.rotation:
        for d in rot:
            e = d >> 1
            u, v, _ = G.edges[e]
            if u == v and e not in swap and (d & 1) == 1 and 2 * e not in rot[:rot.index(d)]:
                swap.add(e)
    if not swap:
        return G

    def fix(d: int) -> int:
        return d ^ 1 if (d >> 1) in swap else d

    rotation = tuple(tuple(fix(d) for d in rot) for rot in G.rotation)
    H = PlanarGraph(G.n, G.edges, rotation, G.terminals)

    def face_map(f: int) -> int:
        return H.dart_face[fix(G.faces[f].darts[0])] if G.faces[f].darts else f

    outer = face_map(G.outer_face) if G.m else None
    cover = assignment = None
    if G.declared_cover is not None:
        cover = tuple(face_map(f) for f in G.declared_cover)
        assignment = G.declared_assignment
    return PlanarGraph(G.n, G.edges, rotation, G.terminals, outer, cover, assignment)
