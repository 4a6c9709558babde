"""Command-line driver.

Exit codes: 0 success, 1 a verification failed, 2 bad input.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from . import dual_labels, duality, elementary, fileio, generators, mincut, oracle, sparsifier, tcs
from .graph import GraphError, PlanarGraph, same_embedding

INPUT_ERRORS = (GraphError, elementary.GuardError, elementary.TerminalMismatch,
                mincut.SubsetError, duality.ReductionError, tcs.TcsFormatError,
                OSError, ValueError)


class VerificationFailed(Exception):
    pass


def _jobs(args) -> int:
    env = os.environ.get("PLANAR_MIMIC_JOBS")
    if env:
        return max(1, int(env))
    return max(1, args.jobs)


def _emit(args, payload, text_lines) -> None:
    if args.format == "json":
        print(json.dumps(payload, sort_keys=True, indent=1))
    else:
        for line in text_lines:
            print(line)


def _write(path, data) -> None:
    mode = "wb" if isinstance(data, bytes) else "w"
    with open(path, mode) as fh:
        fh.write(data)


def _load(args) -> PlanarGraph:
    if not args.input:
        raise ValueError("--input is required")
    return fileio.read_graph(args.input)


def _subset(text: str) -> int:
    return int(text, 0)


# -- subcommands ------------------------------------------------------------------

def cmd_gen(args) -> int:
    lo, hi = (int(x) for x in args.weights.split(","))
    holes = tuple(tuple(int(x) for x in h.split(",")) for h in args.holes.split(";")) \
        if args.holes else ()
    spec = generators.InstanceSpec(args.generator, args.rows, args.cols, args.k, args.placement,
                                   (lo, hi), args.seed, holes)
    G = generators.generate(spec)
    text = fileio.format_graph(G, include_cover=True)
    if args.output:
        _write(args.output, text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_enum(args) -> int:
    G = _load(args)
    cat = elementary.enumerate_elementary(G, args.guard_k)
    lines = cat.export_lines()
    if args.output:
        _write(args.output, "\n".join(lines) + "\n")
    _emit(args, {"k": G.k, "count": len(cat),
                 "entries": [{"mask": c.mask, "cost": c.cost, "edges": sorted(c.edges)}
                             for c in cat]}, lines)
    return 0


def cmd_decompose(args) -> int:
    G = _load(args)
    masks = [_subset(args.subset)] if args.subset else range(1, 1 << (G.k - 1))
    rows = []
    for S in masks:
        dec = elementary.decompose(G, S)
        rows.append({"S": S, "cost": mincut.mincut_value(G, S),
                     "parts": [{"mask": c.mask, "cost": c.cost, "edges": sorted(c.edges)}
                               for c in dec.cutsets]})
    lines = [f"{r['S']:#x} {r['cost']} = " + " + ".join(f"{p['mask']:#x}:{p['cost']}"
                                                       for p in r["parts"]) for r in rows]
    _emit(args, rows, lines)
    return 0


def cmd_sparsify(args) -> int:
    G = _load(args)
    cat = elementary.enumerate_elementary(G, args.guard_k)
    net = sparsifier.build_mimicking(G, cat)
    if args.output:
        fileio.write_graph(net.graph, args.output)
        _write(args.output + ".mapping", "\n".join(net.mapping_lines()) + "\n")
    rep = sparsifier.size_report(G, net)
    _emit(args, rep, [f"{k} {json.dumps(v, sort_keys=True)}" for k, v in sorted(rep.items())])
    return 0


def cmd_alpha(args) -> int:
    G = _load(args)
    cat = elementary.enumerate_elementary(G, args.guard_k)
    a = sparsifier.alpha(G, cat)
    _emit(args, {"alpha": a, "Te": len(cat)}, [f"alpha {a}", f"Te {len(cat)}"])
    return 0


def cmd_fragments(args) -> int:
    G = _load(args)
    ctx = dual_labels.ParityContext(G, elementary.enumerate_elementary(G, args.guard_k))
    pool = dual_labels.collect_fragments(ctx)
    lines = []
    rows = []
    for fr, lab in zip(pool.fragments, pool.labels):
        cost = sum(G.weight(e) for e in fr.edges)
        lines.append(f"{lab.format()} {cost} " + ",".join(map(str, fr.edges)))
        rows.append({"ends": lab.ends, "gaps": lab.gaps, "signature": lab.signature,
                     "cost": cost, "edges": list(fr.edges)})
    for cyc in pool.cycles:
        cost = sum(G.weight(e) for e in cyc.edges)
        lines.append(f"cycle - {cyc.signature:b} {cost} " + ",".join(map(str, sorted(cyc.edges))))
        rows.append({"cycle": True, "signature": cyc.signature, "cost": cost,
                     "edges": sorted(cyc.edges)})
    bound = dual_labels.pool_bound(ctx)
    lines.append(f"# pool {len(pool)} bound {bound}")
    _emit(args, {"pool": rows, "size": len(pool), "bound": bound}, lines)
    return 0


def cmd_tcs_build(args) -> int:
    G = _load(args)
    store = tcs.tcs_build(G, elementary.enumerate_elementary(G, args.guard_k))
    data = tcs.tcs_serialize(store)
    if args.output:
        _write(args.output, data)
    info = {"format": store.format_name, "records": len(store.records),
            "storage_bits": store.storage_bits(), "file_bytes": len(data)}
    _emit(args, info, [f"{k} {v}" for k, v in sorted(info.items())])
    return 0


def cmd_tcs_query(args) -> int:
    if not args.store:
        raise ValueError("--store is required")
    with open(args.store, "rb") as fh:
        store = tcs.tcs_deserialize(fh.read())
    S = _subset(args.subset)
    cost = tcs.tcs_query(store, S)
    _emit(args, {"S": S, "cost": cost}, [str(cost)])
    return 0


def cmd_reduce(args) -> int:
    G = _load(args)
    if args.direction == "cut-dam":
        red = duality.cut_to_dam_instance(G)
    else:
        red = duality.dam_to_cut_instance(G)
    if args.output:
        fileio.write_graph(red.graph, args.output)
    info = {"direction": red.direction, "n": red.graph.n, "m": red.graph.m,
            "terminals": list(red.graph.terminals)}
    _emit(args, info, [f"{k} {v}" for k, v in sorted(info.items())])
    return 0


def cmd_verify_mimic(args) -> int:
    G = _load(args)
    if not args.mimic:
        raise ValueError("--mimic is required")
    H = fileio.read_graph(args.mimic)
    rep = elementary.check_sparsifier(G, H, Fraction(args.q), args.mode, args.guard_k)
    lines = [f"checked {rep.checked} mode {rep.mode} q {rep.q}"]
    lines += [f"violation {S:#x} G={cg} H={ch}" for S, cg, ch in rep.violations]
    lines += [f"elementary-mismatch {S:#x}" for S in rep.elementary_mismatch]
    lines.append("PASS" if rep.ok else "FAIL")
    _emit(args, {"checked": rep.checked, "ok": rep.ok, "violations": rep.violations,
                 "elementary_mismatch": rep.elementary_mismatch}, lines)
    if not rep.ok:
        raise VerificationFailed
    return 0


def cmd_verify_duality(args) -> int:
    G = _load(args)
    red = duality.cut_to_dam_instance(G)
    eq = duality.verify_equivalence(G, red)
    back = duality.fold_back_cut(red, red.graph)
    iso = same_embedding(G, back)
    red2 = duality.dam_to_cut_instance(G)
    net = sparsifier.build_mimicking(red2.graph, merge_parallel=False)
    H = duality.fold_back_dam(red2, net.graph, net.edge_origin)
    dam_bad = duality.check_dam(G, H)
    ok = eq.ok and iso and not dam_bad
    info = {"intervals": eq.checked, "mismatches": eq.mismatches, "fold_back_isomorphic": iso,
            "dam_violations": dam_bad, "dam_size": H.n, "ok": ok}
    lines = [f"intervals {eq.checked} mismatches {len(eq.mismatches)}",
             f"fold-back isomorphic {iso}", f"dam violations {len(dam_bad)} size {H.n}",
             "PASS" if ok else "FAIL"]
    _emit(args, info, lines)
    if not ok:
        raise VerificationFailed
    return 0


def cmd_stats(args) -> int:
    G = _load(args)
    cat = elementary.enumerate_elementary(G, args.guard_k)
    net = sparsifier.build_mimicking(G, cat)
    ms = sparsifier.meeting_vertex_stats(G, cat)
    rep = sparsifier.size_report(G, net, ms.alpha)
    rep["max_meeting"] = ms.max_meeting
    rep["hat_faces"] = ms.hat_faces
    rep["blobs"] = ms.blob_count
    ctx = dual_labels.ParityContext(G, cat)
    rep["labels"] = tcs.label_storage_estimate(ctx)
    lines = [f"{k} {json.dumps(v, sort_keys=True)}" for k, v in sorted(rep.items())]
    _emit(args, rep, lines)
    return 0


def _oracle_row(item):
    G, S = item
    return S, oracle.reference_mincut(G, S)


def cmd_oracle(args) -> int:
    G = _load(args)
    if args.subset:
        masks = [_subset(args.subset)]
    else:
        if G.k > min(12, args.guard_k):
            raise elementary.GuardError(f"full oracle sweep limited to k <= 12 (k={G.k})")
        masks = list(range(1, 1 << (G.k - 1)))
    for S in masks:
        mincut.check_subset(G, S)
    jobs = _jobs(args)
    if jobs > 1 and len(masks) > 1:
        with ProcessPoolExecutor(jobs) as pool:
            rows = list(pool.map(_oracle_row, [(G, S) for S in masks]))
    else:
        rows = [_oracle_row((G, S)) for S in masks]
    _emit(args, [{"S": S, "cost": c} for S, c in rows], [f"{S:#x} {c}" for S, c in rows])
    return 0


COMMANDS = {
    "gen": cmd_gen,
    "enum-elementary": cmd_enum,
    "decompose": cmd_decompose,
    "sparsify": cmd_sparsify,
    "alpha": cmd_alpha,
    "fragments": cmd_fragments,
    "tcs-build": cmd_tcs_build,
    "tcs-query": cmd_tcs_query,
    "reduce": cmd_reduce,
    "verify-mimic": cmd_verify_mimic,
    "verify-duality": cmd_verify_duality,
    "stats": cmd_stats,
    "oracle": cmd_oracle,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help="graph file")
    common.add_argument("--output", help="artifact file to write")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--q", default="1", help="quality factor (rational)")
    common.add_argument("--mode", choices=("elementary", "all"), default="all")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--guard-k", type=int, default=elementary.DEFAULT_GUARD_K)
    common.add_argument("--jobs", type=int, default=1)

    p = argparse.ArgumentParser(prog="planar-mimic",
                                description="Mimicking networks and terminal cuts in planar graphs.")
    sub = p.add_subparsers(dest="command", required=True)
    g = sub.add_parser("gen", parents=[common], help="generate an instance")
    g.add_argument("--generator", choices=("grid", "holed-grid", "star", "path"), default="grid")
    g.add_argument("--rows", type=int, default=3)
    g.add_argument("--cols", type=int, default=3)
    g.add_argument("--k", type=int, default=4)
    g.add_argument("--placement", choices=("boundary", "corners"), default="boundary")
    g.add_argument("--weights", default="1,100", help="lo,hi")
    g.add_argument("--holes", default="", help="r,c;r,c;...")
    for name in COMMANDS:
        if name == "gen":
            continue
        s = sub.add_parser(name, parents=[common])
        if name in ("decompose", "oracle"):
            s.add_argument("--subset", help="terminal mask (default: all)")
        if name == "tcs-query":
            s.add_argument("--store", help="TCS1 file")
            s.add_argument("--subset", required=True)
        if name == "verify-mimic":
            s.add_argument("--mimic", help="candidate sparsifier graph file")
        if name == "reduce":
            s.add_argument("--direction", choices=("cut-dam", "dam-cut"), default="cut-dam")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except VerificationFailed:
        return 1
    except elementary.ConsistencyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
