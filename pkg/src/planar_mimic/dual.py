"""Planar duals.

The dual of ``G`` keeps edge ids and weights.  Dual dart ``d`` leaves the
dual vertex of the primal face containing dart ``d``; the rotation at a dual
vertex is its face walk read backwards, which keeps rotations clockwise.
With these conventions the dual face containing dual dart ``d`` is the
primal vertex ``head(d)``, and the dual of the dual is ``G`` with every edge
reversed.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .graph import Face, PlanarGraph


@dataclass(frozen=True, eq=False)
class DualGraph:
    primal: PlanarGraph
    graph: PlanarGraph
    # dual face id for each primal vertex
    face_of_vertex: tuple[int, ...]
    # primal vertex for each dual face id
    vertex_of_face: tuple[int, ...]

    def vertex_of_primal_face(self, f: int) -> int:
        return f

    @property
    def outer_vertex(self) -> int:
        """Dual vertex of the primal outer face."""
        return self.primal.outer_face


def build_dual(G: PlanarGraph, terminals: Iterable[int] = (),
               outer_vertex: int | None = None) -> DualGraph:
    """Dual graph of ``G``.

    The dual's outer face is the face of ``outer_vertex`` (a primal vertex);
    by default the lowest-id vertex on the primal outer face.
    """
    edges = tuple((G.dart_face[2 * e], G.dart_face[2 * e + 1], w)
                  for e, (_, _, w) in enumerate(G.edges))
    rotation = tuple(tuple(reversed(f.darts)) for f in G.faces)
    if outer_vertex is None:
        outer_vertex = min(G.faces[G.outer_face].vertices)
    D = PlanarGraph(len(G.faces), edges, rotation, tuple(terminals))
    face_of_vertex = [-1] * G.n
    vertex_of_face = [-1] * len(D.faces)
    if G.m == 0:
        face_of_vertex = [0]
        vertex_of_face = [0]
    for f in D.faces if G.m else ():
        (v,) = {G.head(d) for d in f.darts}
        face_of_vertex[v] = f.id
        vertex_of_face[f.id] = v
    D = PlanarGraph(D.n, D.edges, D.rotation, D.terminals, face_of_vertex[outer_vertex])
    return DualGraph(G, D, tuple(face_of_vertex), tuple(vertex_of_face))


def subgraph_face_count(G: PlanarGraph, edge_ids: Iterable[int]) -> tuple[int, int, int]:
    """Faces of the plane subgraph induced by ``edge_ids`` under G's embedding.

    Returns ``(faces, touched vertices, components)``.  Faces are traced
    per component with the restricted rotation; components drawn inside one
    another share a face, so the total is ``sum(F_c) - (C - 1)``.
    """
    keep = set(edge_ids)
    if not keep:
        return 1, 0, 0
    succ: dict[int, int] = {}
    touched: set[int] = set()
    for v, rot in enumerate(G.rotation):
        sub = [d for d in rot if (d >> 1) in keep]
        if sub:
            touched.add(v)
        for i, d in enumerate(sub):
            succ[d] = sub[(i + 1) % len(sub)]
    seen: set[int] = set()
    comp_faces: dict[int, int] = {}
    # component labels by union-find over touched vertices
    parent = {v: v for v in touched}

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in keep:
        a, b = find(G.tail(2 * e)), find(G.tail(2 * e + 1))
        if a != b:
            parent[a] = b
    for start in sorted(succ):
        if start in seen:
            continue
        d = start
        while d not in seen:
            seen.add(d)
            d = succ[d ^ 1]
        root = find(G.tail(start))
        comp_faces[root] = comp_faces.get(root, 0) + 1
    C = len(comp_faces)
    return sum(comp_faces.values()) - (C - 1), len(touched), C


def face_walk_vertices(face: Face, G: PlanarGraph) -> tuple[int, ...]:
    return tuple(G.tail(d) for d in face.darts)
