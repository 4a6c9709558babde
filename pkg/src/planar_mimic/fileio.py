"""Reading and writing the ``planar-graph v1`` text format."""
from __future__ import annotations

from .graph import GraphError, PlanarGraph, from_edge_rotations, normalized

HEADER = "planar-graph v1"


def parse_graph(text: str) -> PlanarGraph:
    """Parse a graph file and validate its embedding.

    Raises :class:`GraphError` on bad syntax, a rotation that is not a
    permutation, a failed Euler check, duplicate terminals or a
    disconnected graph.
    """
    lines = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append(line)
    if not lines or lines[0] != HEADER:
        raise GraphError(f"missing header {HEADER!r}")
    n = m = None
    edges: dict[int, tuple[int, int, int]] = {}
    rots: dict[int, list[int]] = {}
    terminals = None
    outer = None
    cover = None
    assign: dict[int, list[int]] = {}
    for lineno, line in enumerate(lines[1:], start=2):
        key, *rest = line.split()
        try:
            if key == "n":
                n = int(rest[0])
            elif key == "m":
                m = int(rest[0])
            elif key == "e":
                eid, u, v, w = (int(x) for x in rest)
                if eid in edges:
                    raise GraphError(f"duplicate edge id {eid}")
                edges[eid] = (u, v, w)
            elif key == "rot":
                v = int(rest[0])
                if v in rots:
                    raise GraphError(f"duplicate rotation for vertex {v}")
                rots[v] = [int(x) for x in rest[1:]]
            elif key == "terminals":
                terminals = [int(x) for x in rest]
            elif key == "outerface":
                outer = int(rest[0])
            elif key == "facecover":
                cover = [int(x) for x in rest]
            elif key == "faceassign":
                f = rest[0].rstrip(":")
                assign[int(f)] = [int(x) for x in rest[1:]]
            else:
                raise GraphError(f"unknown directive {key!r}")
        except (ValueError, IndexError) as exc:
            raise GraphError(f"line {lineno}: cannot parse {line!r}") from exc
    if n is None or m is None:
        raise GraphError("missing n or m line")
    if sorted(edges) != list(range(m)):
        raise GraphError(f"edge ids must be exactly 0..{m - 1}")
    if any(not 0 <= v < n for v in rots):
        raise GraphError("rotation for a vertex out of range")
    if terminals is None:
        raise GraphError("missing terminals line")
    if len(set(terminals)) != len(terminals):
        raise GraphError("duplicate terminal")
    if not 2 <= len(terminals) <= n:
        raise GraphError(f"need 2 <= k <= n terminals, got {len(terminals)}")
    assignment = None
    if cover is not None:
        if sorted(assign) != sorted(cover):
            raise GraphError("faceassign lines must match the facecover faces")
        assignment = tuple(tuple(assign[f]) for f in cover)
    elif assign:
        raise GraphError("faceassign given without facecover")
    edge_list = [edges[e] for e in range(m)]
    rot_list = [rots.get(v, []) for v in range(n)]
    return from_edge_rotations(n, edge_list, rot_list, terminals=tuple(terminals),
                               declared_outer=outer,
                               declared_cover=tuple(cover) if cover is not None else None,
                               declared_assignment=assignment)


def format_graph(G: PlanarGraph, include_cover: bool = False) -> str:
    """Serialize ``G``; the outer face is always written explicitly."""
    G = normalized(G)
    out = [HEADER, f"n {G.n}", f"m {G.m}"]
    for e, (u, v, w) in enumerate(G.edges):
        out.append(f"e {e} {u} {v} {w}")
    for v, rot in enumerate(G.rotation):
        out.append(" ".join(["rot", str(v)] + [str(d >> 1) for d in rot]))
    out.append(" ".join(["terminals"] + [str(t) for t in G.terminals]))
    out.append(f"outerface {G.outer_face}")
    if include_cover:
        cov = G.cover
        out.append(" ".join(["facecover"] + [str(f) for f in cov.faces]))
        for f, block in zip(cov.faces, cov.assignment):
            out.append(f"faceassign {f}: " + " ".join(str(t) for t in block))
    return "\n".join(out) + "\n"


def read_graph(path) -> PlanarGraph:
    with open(path) as fh:
        return parse_graph(fh.read())


def write_graph(G: PlanarGraph, path, include_cover: bool = False) -> None:
    with open(path, "w") as fh:
        fh.write(format_graph(G, include_cover))
