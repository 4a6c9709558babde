"""Deterministic instance generators (grids, holed grids, stars, paths)."""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

from .graph import GraphError, PlanarGraph, face_terminal_order


@dataclass(frozen=True)
class InstanceSpec:
    generator: str
    rows: int = 3
    cols: int = 3
    k: int = 4
    placement: str = "boundary"
    weight_range: tuple[int, int] = (1, 100)
    seed: int = 0
    holes: tuple[tuple[int, int], ...] = ()
    expected_gamma: int | None = None
    weights: tuple[int, ...] = field(default=())


def geometric_graph(coords: list[tuple[float, float]], pairs: list[tuple[int, int]],
                    weights: list[int], terminals=(), outer_hint: int | None = None,
                    ) -> PlanarGraph:
    """Straight-line drawing -> rotation system (clockwise by angle).

    The outer face is the face that walks around ``outer_hint``'s lowest
    outgoing dart when given, else the default longest face.
    """
    n = len(coords)
    around: list[list[tuple[float, int]]] = [[] for _ in range(n)]
    for e, (u, v) in enumerate(pairs):
        for d, (a, b) in ((2 * e, (u, v)), (2 * e + 1, (v, u))):
            (x0, y0), (x1, y1) = coords[a], coords[b]
            around[a].append((math.atan2(y1 - y0, x1 - x0), d))
    rotation = tuple(tuple(d for _, d in sorted(lst, key=lambda t: (-t[0], t[1])))
                     for lst in around)
    edges = tuple((u, v, w) for (u, v), w in zip(pairs, weights))
    G = PlanarGraph(n, edges, rotation, tuple(terminals))
    return G


def _outer_face_by_geometry(G: PlanarGraph, coords) -> int:
    # the outer face is the only face whose walk has negative signed area
    best = None
    for f in G.faces:
        pts = [coords[G.tail(d)] for d in f.darts]
        area = sum(x0 * y1 - x1 * y0 for (x0, y0), (x1, y1) in zip(pts, pts[1:] + pts[:1]))
        if best is None or area < best[0]:
            best = (area, f.id)
    return best[1]


def grid_graph(rows: int, cols: int, rng: random.Random, weight_range=(1, 100),
               removed: set[tuple[int, int]] = frozenset(), unit: bool = False):
    if rows < 1 or cols < 1 or rows * cols < 2:
        raise GraphError("grid needs at least two vertices")
    ids: dict[tuple[int, int], int] = {}
    coords = []
    for r in range(rows):
        for c in range(cols):
            if (r, c) in removed:
                continue
            ids[(r, c)] = len(coords)
            coords.append((float(c), float(-r)))
    pairs = []
    for r in range(rows):
        for c in range(cols):
            if (r, c) not in ids:
                continue
            for dr, dc in ((0, 1), (1, 0)):
                q = (r + dr, c + dc)
                if q in ids:
                    pairs.append((ids[(r, c)], ids[q]))
    lo, hi = weight_range
    weights = [1 if unit else rng.randint(lo, hi) for _ in pairs]
    return ids, coords, pairs, weights


def _with_outer(G: PlanarGraph, coords, terminals) -> PlanarGraph:
    outer = _outer_face_by_geometry(G, coords)
    return PlanarGraph(G.n, G.edges, G.rotation, tuple(terminals), outer)


def grid(rows: int, cols: int, k: int, seed: int = 0, weight_range=(1, 100),
         placement: str = "boundary", unit: bool = False) -> PlanarGraph:
    """Grid with ``k`` terminals on the outer boundary, listed in boundary order.

    ``placement`` is ``boundary`` (spread evenly, starting at a random
    offset) or ``corners``.
    """
    rng = random.Random(seed)
    ids, coords, pairs, weights = grid_graph(rows, cols, rng, weight_range, unit=unit)
    G = geometric_graph(coords, pairs, weights)
    G = _with_outer(G, coords, ())
    walk = []
    for d in G.faces[G.outer_face].darts:
        v = G.tail(d)
        if v not in walk:
            walk.append(v)
    if placement == "corners":
        corners = {ids[(0, 0)], ids[(0, cols - 1)], ids[(rows - 1, 0)], ids[(rows - 1, cols - 1)]}
        chosen = [v for v in walk if v in corners][:k]
    else:
        if not 2 <= k <= len(walk):
            raise GraphError(f"cannot place {k} terminals on a boundary of {len(walk)}")
        off = rng.randrange(len(walk))
        chosen = sorted({walk[(off + (i * len(walk)) // k) % len(walk)] for i in range(k)},
                        key=lambda v: (walk.index(v) - off) % len(walk))
    if len(chosen) < 2:
        raise GraphError("need at least two terminals")
    start = chosen.index(min(chosen))
    chosen = chosen[start:] + chosen[:start]
    return PlanarGraph(G.n, G.edges, G.rotation, tuple(chosen), G.outer_face)


def holed_grid(rows: int, cols: int, holes: list[tuple[int, int]], per_hole: int,
               seed: int = 0, weight_range=(1, 100), outer_terminals: int = 0) -> PlanarGraph:
    """Grid with single-vertex holes; terminals sit on hole boundaries.

    Terminals are chosen among vertices that touch exactly one hole and not
    the outer face, so each hole's terminals need their own cover face.
    """
    rng = random.Random(seed)
    ids, coords, pairs, weights = grid_graph(rows, cols, rng, weight_range, removed=set(holes))
    G = geometric_graph(coords, pairs, weights)
    G = _with_outer(G, coords, ())
    outer_v = G.faces[G.outer_face].vertices
    hole_faces = []
    for (r, c) in holes:
        ring = {ids[(r + dr, c + dc)] for dr in (-1, 0, 1) for dc in (-1, 0, 1)
                if (r + dr, c + dc) in ids}
        f = max((f for f in G.faces if f.id != G.outer_face),
                key=lambda f: (len(f.vertices & ring), len(f), -f.id))
        hole_faces.append(f)
    terminals: list[int] = []
    for f in hole_faces:
        others = set().union(*(g.vertices for g in hole_faces if g.id != f.id)) | outer_v
        walk = [v for v in face_terminal_order(G, f.id, f.vertices) if v not in others]
        if len(walk) < per_hole:
            raise GraphError("hole too small for requested terminals")
        off = rng.randrange(len(walk))
        terminals += [walk[(off + (i * len(walk)) // per_hole) % len(walk)]
                      for i in range(per_hole)]
    if outer_terminals:
        walk = [v for v in face_terminal_order(G, G.outer_face, outer_v)
                if not any(v in f.vertices for f in hole_faces)]
        off = rng.randrange(len(walk))
        terminals += [walk[(off + (i * len(walk)) // outer_terminals) % len(walk)]
                      for i in range(outer_terminals)]
    return PlanarGraph(G.n, G.edges, G.rotation, tuple(terminals), G.outer_face)


def star(leaves: int, weights=None, seed: int = 0, weight_range=(1, 100)) -> PlanarGraph:
    """Center 0 with terminal leaves 1..leaves."""
    rng = random.Random(seed)
    coords = [(0.0, 0.0)] + [(math.cos(-2 * math.pi * i / leaves), math.sin(-2 * math.pi * i / leaves))
                             for i in range(leaves)]
    pairs = [(0, i + 1) for i in range(leaves)]
    if weights is None:
        weights = [rng.randint(*weight_range) for _ in pairs]
    G = geometric_graph(coords, list(pairs), list(weights))
    return PlanarGraph(G.n, G.edges, G.rotation, tuple(range(1, leaves + 1)), 0)


def path(weights, terminals=None) -> PlanarGraph:
    """Path 0-1-...; by default the two ends are the terminals."""
    n = len(weights) + 1
    coords = [(float(i), 0.0) for i in range(n)]
    pairs = [(i, i + 1) for i in range(n - 1)]
    G = geometric_graph(coords, pairs, list(weights))
    if terminals is None:
        terminals = (0, n - 1)
    return PlanarGraph(G.n, G.edges, G.rotation, tuple(terminals), 0)


def generate(spec: InstanceSpec) -> PlanarGraph:
    if spec.generator == "grid":
        return grid(spec.rows, spec.cols, spec.k, spec.seed, spec.weight_range, spec.placement)
    if spec.generator == "holed-grid":
        per = max(1, spec.k // max(1, len(spec.holes)))
        return holed_grid(spec.rows, spec.cols, list(spec.holes), per, spec.seed,
                          spec.weight_range)
    if spec.generator == "star":
        return star(spec.k, seed=spec.seed, weight_range=spec.weight_range)
    if spec.generator == "path":
        rng = random.Random(spec.seed)
        return path([rng.randint(*spec.weight_range) for _ in range(max(1, spec.cols - 1))])
    raise GraphError(f"unknown generator {spec.generator!r}")
