import random
from collections import Counter

import pytest

from planar_mimic.dual_labels import (LabelError, ParityContext, block_signature,
                                      canonical_connector, circuit_of, collect_fragments,
                                      fragment_cycle, label, naive_bound, naive_label,
                                      odd_terminals, parity, path_parity, pool_bound,
                                      random_simple_path)
from planar_mimic.generators import grid
from planar_mimic.mincut import full_mask, mask_of, min_terminal_cut

import suite


def gamma_instances(g):
    return [(n, G) for n, G in suite.instances() if G.cover.gamma == g]


def test_parity_trivial():
    G = grid(4, 4, 5, seed=1)
    ctx = ParityContext(G)
    assert all(parity(ctx, v, {}) == 0 for v in range(G.n))
    circ = circuit_of(min_terminal_cut(G, 1).edges)
    assert parity(ctx, ctx.v_inf, circ) == 0
    assert odd_terminals(ctx, {}) == 0


def test_square_parity():
    G = grid(2, 2, 4, unit=True)
    ctx = ParityContext(G)
    s = 3
    assert s != ctx.v_inf
    circ = circuit_of(min_terminal_cut(G, mask_of(G, [s])).edges)
    assert [parity(ctx, v, circ) for v in range(4)] == [int(v == s) for v in range(4)]


def test_odd_terminals_match_catalog():
    for name, G in suite.instances()[::3]:
        ctx = ParityContext(G)
        full = full_mask(G.k)
        for c in ctx.catalog:
            assert odd_terminals(ctx, circuit_of(c.edges)) in (c.mask, full ^ c.mask)


def test_parity_is_path_independent():
    rng = random.Random(5)
    G = suite.instances()[40][1]
    ctx = ParityContext(G)
    for c in ctx.catalog:
        circ = circuit_of(c.edges)
        for v in rng.sample(range(G.n), 5):
            p = random_simple_path(G, v, ctx.v_inf, rng)
            assert path_parity(p, circ) == parity(ctx, v, circ)


def test_two_cover_faces_give_two_fragments():
    found = 0
    for name, G in gamma_instances(2):
        ctx = ParityContext(G)
        for c in ctx.catalog:
            frags, whole = fragment_cycle(ctx, c.mask)
            visited = {ctx.G.dart_face[d] for e in c.edges for d in (2 * e, 2 * e + 1)}
            if set(ctx.W) <= visited:
                found += 1
                assert len(frags) == 2 and whole is None
    assert found


def test_w_avoiding_cycle_is_pooled():
    G = suite.ring_instance()
    ctx = ParityContext(G)
    pool = collect_fragments(ctx)
    assert len(pool.cycles) == 1
    (S,) = pool.cycle_sources[0]
    frags, whole = fragment_cycle(ctx, S)
    assert frags == [] and whole == pool.cycles[0].edges
    assert pool.cycles[0].boundary_edges == 0
    nl = naive_label(ctx, S)
    assert nl.x == nl.y == (0,) * ctx.cover.gamma


def test_fragment_rejects_non_elementary():
    G = grid(4, 4, 6, seed=2)
    ctx = ParityContext(G)
    bad = next(S for S in range(1, 1 << (G.k - 1)) if ctx.catalog.lookup(S) is None)
    with pytest.raises(LabelError):
        fragment_cycle(ctx, bad)


def test_connector_has_the_fragment_label_parts():
    for name, G in gamma_instances(2)[:4] + gamma_instances(3)[:3]:
        ctx = ParityContext(G)
        pool = collect_fragments(ctx)
        for fr, lab in zip(pool.fragments, pool.labels):
            conn = canonical_connector(ctx, fr.ends, fr.gaps)
            assert ctx.gap(conn[0]) == (fr.ends[0], fr.gaps[0])
            assert ctx.gap(conn[-1] ^ 1) == (fr.ends[1], fr.gaps[1])
            inner = {G.dart_face[d] for d in conn[1:]}
            assert not inner & set(ctx.W)
            if len(fr.darts) == 1:
                assert tuple(conn) == fr.darts
            if tuple(conn) == fr.darts:
                assert lab.signature == 0


def test_labels_distinct_and_bounded():
    for g in (1, 2, 3):
        for name, G in gamma_instances(g)[:4]:
            ctx = ParityContext(G)
            pool = collect_fragments(ctx)
            assert len(set(pool.labels)) == len(pool.labels)
            assert len(pool) <= pool_bound(ctx)
            assert len(ctx.catalog) <= naive_bound(ctx)
            for c in ctx.catalog:
                parts = pool.edge_set(c.mask)
                assert sum(len(p) for p in parts) == len(c.edges)
                assert frozenset().union(*parts) == c.edges


def test_naive_label_classes():
    for name, G in gamma_instances(3)[:3] + gamma_instances(2)[:3]:
        ctx = ParityContext(G)
        classes = Counter(naive_label(ctx, c.mask) for c in ctx.catalog)
        assert max(classes.values()) <= 4 ** ctx.cover.gamma


def test_symmetric_difference_identity():
    rng = random.Random(11)
    G = gamma_instances(2)[0][1]
    ctx = ParityContext(G)
    D = ctx.dual
    w1, w2 = ctx.W
    for _ in range(20):
        A, B, C = (random_simple_path(D, w1, w2, rng) for _ in range(3))
        lhs = odd_terminals(ctx, circuit_of(A, C))
        rhs = odd_terminals(ctx, circuit_of(A, B)) ^ odd_terminals(ctx, circuit_of(B, C))
        assert lhs == rhs


def test_block_signature_rejects_mixed_block():
    G = gamma_instances(2)[0][1]
    ctx = ParityContext(G)
    block = ctx.cover.assignment[0]
    one = mask_of(G, [block[0]])
    with pytest.raises(LabelError):
        block_signature(ctx, one)


def test_label_of_fragment_is_stable():
    G = gamma_instances(2)[1][1]
    ctx = ParityContext(G)
    pool = collect_fragments(ctx)
    again = ParityContext(G)
    assert [label(again, fr) for fr in pool.fragments] == pool.labels
