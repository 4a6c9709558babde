"""Acceptance gate: one check per criterion, each reporting a PASS or FAIL line.

Run under pytest (the summary lines appear at the end of the session) or
directly with ``python3 tests/test_acceptance.py``.
"""
from __future__ import annotations

import itertools
import json
import os
import random
import subprocess
import sys
import time
from collections import Counter
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

import suite  # noqa: E402
from planar_mimic.dual import build_dual, subgraph_face_count  # noqa: E402
from planar_mimic.dual_labels import (ParityContext, circuit_of, collect_fragments,  # noqa: E402
                                      naive_bound, naive_label, odd_terminals, parity,
                                      path_parity, pool_bound, random_simple_path)
from planar_mimic.duality import (check_dam, cut_to_dam_instance, dam_to_cut_instance,  # noqa: E402
                                  fold_back_cut, fold_back_dam, interval_mask, intervals)
from planar_mimic.elementary import (check_sparsifier, decompose,  # noqa: E402
                                     enumerate_elementary, is_elementary)
from planar_mimic.fileio import format_graph  # noqa: E402
from planar_mimic.graph import GraphError, outer_terminal_order, same_embedding  # noqa: E402
from planar_mimic.mincut import components, full_mask, min_terminal_cut  # noqa: E402
from planar_mimic.oracle import all_pairs_distances  # noqa: E402
from planar_mimic.sparsifier import (build_mimicking, contract_blobs,  # noqa: E402
                                     meeting_vertex_stats, union_elementary)
from planar_mimic.tcs import (COMPACT, pack_bits, packed_size, tcs_build,  # noqa: E402
                              tcs_deserialize, tcs_query, tcs_serialize, unpack_bits)

RESULTS: dict[int, tuple[bool, str]] = suite.ACCEPTANCE


def canonical_subsets(G):
    return range(1, 1 << (G.k - 1))


def euler_ok(G) -> bool:
    return G.n - G.m + len(G.faces) == 2


# -- criteria -----------------------------------------------------------------

def criterion_1():
    start = time.perf_counter()
    pool = suite.instances()
    bad = []
    checked = 0
    for name, G in pool:
        if not (G.n <= 36 and G.k <= 8 and all(1 <= w <= 100 for _, _, w in G.edges)):
            bad.append((name, "instance outside the stated ranges"))
        H = build_mimicking(G).graph
        for S in canonical_subsets(G):
            checked += 1
            if min_terminal_cut(H, S).cost != suite.oracle(name, G, S):
                bad.append((name, S))
    elapsed = time.perf_counter() - start
    ok = not bad and len(pool) >= 50 and elapsed < 300
    return ok, f"{len(pool)} instances, {checked} subsets, {len(bad)} mismatches, {elapsed:.1f}s"


def criterion_2():
    bad = []
    checked = 0
    for name, G in suite.instances():
        cat = set(enumerate_elementary(G).masks)
        for S in canonical_subsets(G):
            checked += 1
            dec = decompose(G, S)
            target = min_terminal_cut(G, S)
            seen: set[int] = set()
            disjoint = True
            for c in dec.cutsets:
                disjoint &= not (seen & c.edges)
                seen |= c.edges
            elementary = all(c.mask in cat and is_elementary(G, c.mask) for c in dec.cutsets)
            cost_ok = sum(c.cost for c in dec.cutsets) == target.cost == suite.oracle(name, G, S)
            if not (disjoint and elementary and seen == target.edges and cost_ok):
                bad.append((name, S))
    return not bad, f"{checked} decompositions, {len(bad)} failures"


def _candidates(G, rng):
    net = build_mimicking(G)
    yield "mimic", net.graph
    yield "identity", G
    cut = min_terminal_cut(G, 1)
    e = min(cut.edges)
    yield "doubled", suite.reweighted(G, [w * 2 if i == e else w for i, (_, _, w) in enumerate(G.edges)])
    yield "noisy", suite.reweighted(G, [w + rng.choice((0, 0, 1)) for _, _, w in G.edges])
    hat = sorted(net.hat_edges)
    try:
        yield "over-contracted", contract_blobs(G, frozenset(hat[1:]))[0]
    except GraphError:  # the extra contraction merged two terminals
        pass


def criterion_3():
    rng = random.Random(3)
    counter = []
    passed_el = failed_el = 0
    for name, G in suite.instances():
        for kind, H in _candidates(G, rng):
            el = check_sparsifier(G, H, 1, "elementary")
            if el.ok:
                passed_el += 1
                if not check_sparsifier(G, H, 1, "all").ok:
                    counter.append((name, kind))
            else:
                failed_el += 1
    detail = (f"{passed_el + failed_el} pairs, {passed_el} pass elementary-only, "
              f"{len(counter)} counterexamples")
    return not counter and passed_el > 0 and failed_el > 0, detail


def _is_cyclic_interval(positions: set[int], k: int) -> bool:
    starts = [p for p in positions if (p - 1) % k not in positions]
    return len(starts) == 1


def criterion_4():
    bad = []
    count = 0
    for name, G in suite.outer_instances():
        count += 1
        cat = enumerate_elementary(G)
        k = G.k
        if len(cat) > k * (k - 1) // 2:
            bad.append((name, "too many elementary sets"))
        order = outer_terminal_order(G)
        pos = {G.terminal_index[t]: p for p, t in enumerate(order)}
        for c in cat:
            if not _is_cyclic_interval({pos[i] for i in range(k) if c.mask >> i & 1}, k):
                bad.append((name, "not an interval", c.mask))
        terms = set(G.terminals)
        for a, b in itertools.combinations_with_replacement(cat.entries, 2):
            part = components(G, a.edges | b.edges)
            if len(part) > 4 or any(not comp & terms for comp in part.components):
                bad.append((name, "union", a.mask, b.mask))
    return not bad, f"{count} outer-face instances, {len(bad)} failures"


def _label_instances():
    return list(suite.instances()) + [("ring", suite.ring_instance())]


def criterion_5():
    bad = []
    gammas = Counter()
    pooled = 0
    for name, G in _label_instances():
        ctx = ParityContext(G)
        gammas[ctx.cover.gamma] += 1
        pool = collect_fragments(ctx)  # raises on a duplicate label
        pooled += len(pool.cycles)
        if len(set(pool.labels)) != len(pool.labels):
            bad.append((name, "duplicate label"))
        if len(pool) > pool_bound(ctx):
            bad.append((name, "pool too large"))
        if len(ctx.catalog) > naive_bound(ctx):
            bad.append((name, "naive bound"))
        classes = Counter(naive_label(ctx, c.mask) for c in ctx.catalog)
        if classes and max(classes.values()) > 4 ** ctx.cover.gamma:
            bad.append((name, "naive class"))
        for c in ctx.catalog:
            parts = pool.edge_set(c.mask)
            if sum(map(len, parts)) != len(c.edges) or frozenset().union(*parts) != c.edges:
                bad.append((name, "reconstruction", c.mask))
    ok = not bad and all(gammas[g] for g in (1, 2, 3)) and pooled > 0
    mix = ", ".join(f"gamma={g}: {n}" for g, n in sorted(gammas.items()))
    return ok, f"{mix}; {pooled} whole cycles pooled; {len(bad)} failures"


def criterion_6():
    rng = random.Random(6)
    bad = []
    samples = 0
    for name, G in _label_instances():
        ctx = ParityContext(G)
        cats = list(ctx.catalog)
        circuits = [circuit_of(c.edges) for c in cats]
        if len(cats) > 1:
            for _ in range(3):
                a, b = rng.sample(cats, 2)
                circuits.append(circuit_of(a.edges, b.edges))
        for _ in range(6):
            circ = rng.choice(circuits)
            v = rng.randrange(G.n)
            samples += 1
            fixed = parity(ctx, v, circ)
            if ctx.parities(circ)[v] != fixed:
                bad.append((name, v, "vector"))
            for _ in range(10):
                if path_parity(random_simple_path(G, v, ctx.v_inf, rng), circ) != fixed:
                    bad.append((name, v))
    multi = [(name, G) for name, G in _label_instances() if G.cover.gamma >= 2]
    triples = 0
    while triples < 100:
        name, G = multi[triples % len(multi)]
        ctx = ParityContext(G)
        wi, wj = rng.sample(ctx.W, 2)
        A, B, C = (random_simple_path(ctx.dual, wi, wj, rng) for _ in range(3))
        lhs = odd_terminals(ctx, circuit_of(A, C))
        rhs = odd_terminals(ctx, circuit_of(A, B)) ^ odd_terminals(ctx, circuit_of(B, C))
        if lhs != rhs:
            bad.append((name, "triple"))
        triples += 1
    return not bad, f"{samples} (v, circuit) samples x 10 paths, {triples} triples, {len(bad)} failures"


def criterion_7():
    bad = []
    queries = 0
    for name, G in suite.instances():
        store = tcs_build(G)
        full = full_mask(G.k)
        for S in range(1, full):
            queries += 1
            if tcs_query(store, S) != suite.oracle(name, G, min(S, full ^ S)):
                bad.append((name, S))
        data = tcs_serialize(store)
        back = tcs_deserialize(data)
        if back != store or tcs_serialize(back) != data:
            bad.append((name, "round trip"))
        if unpack_bits(pack_bits(store), store.k, store.fmt, len(store.records)) != store:
            bad.append((name, "packed round trip"))
        te, k = len(store.records), G.k
        limit = te * (2 * max(1, (k - 1).bit_length()) + 64) if store.fmt == COMPACT else te * (k + 64)
        if packed_size(store) > limit:
            bad.append((name, "storage"))
    return not bad, f"{queries} queries, {len(bad)} failures"


def criterion_8():
    bad = []
    checked = 0
    for name, G in suite.outer_instances():
        red = cut_to_dam_instance(G)
        G2 = red.graph
        dist2 = all_pairs_distances(G2)
        k = G.k
        for i, j in intervals(k):
            checked += 1
            cut = suite.oracle(name, G, min(m := interval_mask(G, red.order, i, j), full_mask(k) ^ m))
            if cut != dist2[G2.terminals[(i - 1) % k]][G2.terminals[j]]:
                bad.append((name, i, j))
        back = fold_back_cut(red, G2)
        if not same_embedding(G, back):
            bad.append((name, "fold-back not isomorphic"))
        red2 = dam_to_cut_instance(G)
        net = build_mimicking(red2.graph, merge_parallel=False)
        H = fold_back_dam(red2, net.graph, net.edge_origin)
        dg, dh = all_pairs_distances(G), all_pairs_distances(H)
        for a, b in itertools.combinations(range(k), 2):
            if dg[G.terminals[a]][G.terminals[b]] != dh[H.terminals[a]][H.terminals[b]]:
                bad.append((name, "dam", a, b))
        if check_dam(G, H):
            bad.append((name, "check_dam"))
    return not bad, f"{checked} interval equalities, {len(bad)} failures"


def criterion_9():
    bad = []
    for name, G in _label_instances():
        D = build_dual(G).graph
        cat = enumerate_elementary(G)
        net = build_mimicking(G, cat)
        H = net.graph
        for X in (G, D, H, build_dual(H).graph):
            if not euler_ok(X):
                bad.append((name, "euler"))
        if not same_embedding(G, build_dual(D).graph):
            bad.append((name, "dual of dual"))
        hat = union_elementary(cat)
        faces, _, _ = subgraph_face_count(D, hat)
        if not H.n == len(components(G, hat)) == faces:
            bad.append((name, "blob count"))
        st = meeting_vertex_stats(G, cat)
        if st.max_meeting > 2 * st.alpha:
            bad.append((name, "meeting"))
    return not bad, f"{len(_label_instances())} instances, {len(bad)} failures"


PIPELINE = [
    ["gen", "--rows", "5", "--cols", "5", "--k", "6", "--seed", "11", "--output", "g.txt"],
    ["gen", "--generator", "holed-grid", "--rows", "7", "--cols", "5", "--k", "6",
     "--holes", "2,2;4,2", "--seed", "4", "--output", "h.txt"],
    ["sparsify", "--input", "g.txt", "--output", "g.mimic"],
    ["sparsify", "--input", "h.txt", "--output", "h.mimic"],
    ["tcs-build", "--input", "h.txt", "--output", "h.tcs"],
    ["tcs-build", "--input", "g.txt", "--output", "g.tcs"],
    ["enum-elementary", "--input", "h.txt", "--output", "h.elem"],
    ["decompose", "--input", "g.txt", "--format", "json"],
    ["fragments", "--input", "h.txt"],
    ["stats", "--input", "h.txt", "--format", "json"],
    ["reduce", "--input", "g.txt", "--direction", "dam-cut", "--output", "g.red"],
    ["verify-duality", "--input", "g.txt"],
    ["oracle", "--input", "g.txt", "--jobs", "2"],
]


def _pipeline_run(workdir: Path, hashseed: str) -> dict[str, bytes]:
    workdir.mkdir(parents=True, exist_ok=True)
    env = dict(os.environ, PYTHONHASHSEED=hashseed)
    out = {}
    for step, argv in enumerate(PIPELINE):
        res = subprocess.run([sys.executable, "-m", "planar_mimic", *argv], cwd=workdir,
                             capture_output=True, env=env)
        out[f"step{step}.stdout"] = res.stdout
        out[f"step{step}.code"] = str(res.returncode).encode()
    for p in sorted(workdir.iterdir()):
        out[p.name] = p.read_bytes()
    return out


def _in_process_artifacts() -> bytes:
    chunks = []
    for name, G in suite.instances()[::5]:
        fresh = type(G)(G.n, G.edges, G.rotation, G.terminals, G.declared_outer)
        net = build_mimicking(fresh)
        chunks.append(format_graph(net.graph).encode())
        chunks.append("\n".join(net.mapping_lines()).encode())
        chunks.append(tcs_serialize(tcs_build(fresh)))
        pool = collect_fragments(ParityContext(fresh))
        chunks.append(json.dumps([lab.format() for lab in pool.labels]).encode())
    return b"".join(chunks)


def criterion_10(tmp: Path):
    a = _pipeline_run(tmp / "run1", "1")
    b = _pipeline_run(tmp / "run2", "987")
    diff = sorted(k for k in set(a) | set(b) if a.get(k) != b.get(k))
    codes_ok = all(a[f"step{i}.code"] == b"0" for i in range(len(PIPELINE)))
    same_in_process = _in_process_artifacts() == _in_process_artifacts()
    ok = not diff and codes_ok and same_in_process
    return ok, f"{len(a)} artifacts and reports compared, {len(diff)} differ"


# -- pytest entry points ------------------------------------------------------------

def _record(n: int, result: tuple[bool, str]) -> None:
    RESULTS[n] = result
    ok, detail = result
    print(f"criterion {n}: {'PASS' if ok else 'FAIL'} ({detail})")
    assert ok, detail


CRITERIA = {1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5,
            6: criterion_6, 7: criterion_7, 8: criterion_8, 9: criterion_9}


@pytest.mark.parametrize("n", sorted(CRITERIA))
def test_criterion(n):
    _record(n, CRITERIA[n]())


def test_criterion_10(tmp_path):
    _record(10, criterion_10(tmp_path))


if __name__ == "__main__":
    import tempfile

    failed = 0
    for n, fn in sorted(CRITERIA.items()):
        ok, detail = fn()
        failed += not ok
        print(f"criterion {n}: {'PASS' if ok else 'FAIL'} ({detail})", flush=True)
    with tempfile.TemporaryDirectory() as d:
        ok, detail = criterion_10(Path(d))
    failed += not ok
    print(f"criterion 10: {'PASS' if ok else 'FAIL'} ({detail})")
    sys.exit(1 if failed else 0)
