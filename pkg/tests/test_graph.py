import pytest

from planar_mimic.dual import build_dual
from planar_mimic.fileio import format_graph, parse_graph, read_graph, write_graph
from planar_mimic.generators import grid, holed_grid, path
from planar_mimic.graph import (EmbeddingEditor, GraphError, PlanarGraph, face_cover,
                                from_edge_rotations, maximal_intervals, outer_cycle,
                                outer_terminal_order, same_embedding)

import suite


def square(weights=(1, 1, 1, 1)):
    return suite.reweighted(grid(2, 2, 4, unit=True), weights)


def euler(G):
    return G.n - G.m + len(G.faces)


def test_single_edge():
    G = parse_graph("planar-graph v1\nn 2\nm 1\ne 0 0 1 5\nrot 0 0\nrot 1 0\nterminals 0 1\n")
    assert (G.n, G.m, len(G.faces)) == (2, 1, 1)
    assert euler(G) == 2


def test_square_faces():
    G = square()
    assert len(G.faces) == 2
    assert all(len(f.darts) == 4 for f in G.faces)
    assert euler(G) == 2


def test_self_loop_two_faces():
    G = from_edge_rotations(2, [(0, 0, 1), (0, 1, 1)], [[0, 0, 1], [1]], terminals=(0, 1))
    assert len(G.faces) == 2
    assert euler(G) == 2


@pytest.mark.parametrize("text, msg", [
    ("n 2\n", "header"),
    ("planar-graph v1\nn 2\nm 1\ne 0 0 1 x\n", "parse"),
    ("planar-graph v1\nn 2\nm 1\ne 0 0 1 5\nrot 0 0\nrot 1 0\nterminals 0 0\n", "duplicate"),
    ("planar-graph v1\nn 3\nm 1\ne 0 0 1 5\nrot 0 0\nrot 1 0\nterminals 0 1\n", None),
    ("planar-graph v1\nn 2\nm 1\ne 0 0 1 5\nrot 0 0 0\nrot 1 0\nterminals 0 1\n", None),
])
def test_parse_errors(text, msg):
    with pytest.raises(GraphError, match=msg):
        parse_graph(text)


def test_wrong_embedding_fails_euler():
    # K4 drawn with a rotation that is not planar
    G = grid(2, 2, 4, unit=True)
    edges = list(G.edges) + [(0, 3, 1), (1, 2, 1)]
    rots = [[0, 1, 4], [2, 0, 5], [1, 3, 5], [4, 3, 2]]
    with pytest.raises(GraphError):
        from_edge_rotations(4, edges, rots, terminals=(0, 1))


def test_file_round_trip(tmp_path):
    for name, G in suite.instances()[::7]:
        p = tmp_path / f"{name}.txt"
        write_graph(G, p, include_cover=True)
        H = read_graph(p)
        assert same_embedding(G, H)
        assert format_graph(H, include_cover=True) == p.read_text()


def test_dual_of_square_is_bond():
    D = build_dual(square()).graph
    assert D.n == 2 and D.m == 4
    assert all(set(D.endpoints(e)) == {0, 1} for e in range(4))


def test_bridge_becomes_loop():
    D = build_dual(path([3, 7])).graph
    assert D.n == 1
    assert all(D.endpoints(e) == (0, 0) for e in range(D.m))


def test_dual_of_dual():
    for _, G in suite.instances()[::5]:
        D = build_dual(G).graph
        assert euler(D) == 2
        assert same_embedding(G, build_dual(D).graph)


def test_outer_order_square_and_corners():
    assert outer_terminal_order(square()) == (0, 1, 3, 2)
    G = grid(3, 3, 4, placement="corners", unit=True)
    order = outer_terminal_order(G)
    assert order[0] == min(G.terminals)
    cyc = outer_cycle(G)
    pos = [cyc.index(t) for t in order]
    start = pos[0]
    assert [(p - start) % len(cyc) for p in pos] == sorted((p - start) % len(cyc) for p in pos)


def test_outer_order_rejects_inner_terminal():
    G = grid(3, 3, 2, unit=True).with_terminals((0, 4))
    with pytest.raises(GraphError):
        outer_terminal_order(G)


def test_maximal_intervals():
    G = grid(3, 3, 4, unit=True)
    cyc = outer_cycle(G)
    assert maximal_intervals(G, []) == []
    whole = maximal_intervals(G, cyc)
    assert len(whole) == 1 and set(whole[0].vertices) == set(cyc)
    two = maximal_intervals(G, [cyc[0], cyc[1], cyc[4]])
    assert sorted(len(iv.vertices) for iv in two) == [1, 2]


def test_face_cover():
    assert face_cover(grid(4, 4, 6, seed=1)).gamma == 1
    G = holed_grid(7, 5, [(2, 2), (4, 2)], 3, seed=0)
    cov = face_cover(G)
    assert cov.gamma == 2
    assert sorted(t for blk in cov.assignment for t in blk) == sorted(G.terminals)


def test_editor_contract_keeps_lower_id():
    G = grid(3, 3, 2, unit=True)
    ed = EmbeddingEditor(G)
    e = 0
    u, v = G.endpoints(e)
    assert ed.contract_edge(e) == min(u, v)
    outer = next(d for d in G.faces[G.outer_face].darts if d >> 1 != e)
    H, vmap, _ = ed.freeze(G.terminals, outer)
    assert H.n == G.n - 1 and H.m == G.m - 1
    assert euler(H) == 2


def test_disconnected_rejected():
    with pytest.raises(GraphError):
        PlanarGraph(4, ((0, 1, 1), (2, 3, 1)), ((0,), (1,), (2,), (3,)), (0, 2))
