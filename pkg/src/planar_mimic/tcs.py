"""Terminal-cuts scheme: store the elementary cut costs, answer any cut query.

Query semantics: if ``S`` is the symmetric difference of stored sets
``S_1..S_r`` (up to complement), the union of their cutsets separates
``S``, so ``sum c(E_{S_i}) >= mincut(S)``.  Decomposing ``E_S`` into
elementary cutsets gives such a family with equality.  So the answer is a
shortest path from the empty set to ``S`` in the group of subsets modulo
complement, with one generator per stored set.
"""
from __future__ import annotations

import heapq
import math
import struct
from dataclasses import dataclass, field

from .elementary import ElementaryCatalog, enumerate_elementary
from .graph import PlanarGraph
from .mincut import SubsetError, canonical, full_mask

MAGIC = b"TCS1"
GENERIC, COMPACT = 0, 1
FORMAT_NAMES = {GENERIC: "generic", COMPACT: "interval-compact"}
COST_BITS = 64


class TcsFormatError(ValueError):
    pass


@dataclass(frozen=True)
class TcsStore:
    k: int
    fmt: int
    records: tuple[tuple[int, int], ...]  # (canonical mask, cost), sorted by mask
    _dist: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def format_name(self) -> str:
        return FORMAT_NAMES[self.fmt]

    def storage_bits(self) -> int:
        return packed_size(self)


def _interval(mask: int) -> tuple[int, int] | None:
    if mask == 0:
        return None
    low = (mask & -mask).bit_length() - 1
    run = mask >> low
    if run & (run + 1):
        return None
    return low, low + run.bit_length() - 1


def tcs_build(G: PlanarGraph, catalog: ElementaryCatalog | None = None) -> TcsStore:
    if catalog is None:
        catalog = enumerate_elementary(G)
    records = tuple(sorted((c.mask, c.cost) for c in catalog))
    compact = G.cover.gamma == 1 and all(_interval(m) is not None for m, _ in records)
    return TcsStore(G.k, COMPACT if compact else GENERIC, records)


def _distances(store: TcsStore) -> list[float]:
    if "all" in store._dist:
        return store._dist["all"]
    k = store.k
    size = 1 << (k - 1)
    top = 1 << (k - 1)
    full = full_mask(k)
    dist = [math.inf] * size
    dist[0] = 0
    heap = [(0, 0)]
    gens = [(m, c) for m, c in store.records]
    while heap:
        d, x = heapq.heappop(heap)
        if d > dist[x]:
            continue
        for m, c in gens:
            y = x ^ m
            if y & top:
                y ^= full
            nd = d + c
            if nd < dist[y]:
                dist[y] = nd
                heapq.heappush(heap, (nd, y))
    store._dist["all"] = dist
    return dist


def tcs_query(store: TcsStore, S: int) -> int:
    """Minimum cut value for terminal mask ``S`` using only the store."""
    if not 0 < S < full_mask(store.k):
        raise SubsetError(f"terminal subset {S:#x} must be non-empty and proper")
    d = _distances(store)[canonical(S, store.k)]
    if d == math.inf:
        raise TcsFormatError(f"store cannot express {S:#x}; it is incomplete or corrupt")
    return d


def masks_separate(masks, S: int, k: int) -> bool:
    """Every pair ``t in S``, ``t' not in S`` is split by some mask."""
    inside = [i for i in range(k) if S >> i & 1]
    outside = [i for i in range(k) if not S >> i & 1]
    for a in inside:
        for b in outside:
            if not any((m >> a & 1) != (m >> b & 1) for m in masks):
                return False
    return True


# -- byte format ------------------------------------------------------------

def tcs_serialize(store: TcsStore) -> bytes:
    out = [MAGIC, struct.pack(">BHI", store.fmt, store.k, len(store.records))]
    nbytes = (store.k + 7) // 8
    for mask, cost in store.records:
        if store.fmt == COMPACT:
            i, j = _interval(mask)
            out.append(struct.pack(">HHQ", i, j, cost))
        else:
            out.append(mask.to_bytes(nbytes, "big") + struct.pack(">Q", cost))
    return b"".join(out)


def tcs_deserialize(data: bytes) -> TcsStore:
    if data[:4] != MAGIC:
        raise TcsFormatError("bad magic")
    if len(data) < 11:
        raise TcsFormatError("truncated header")
    fmt, k, count = struct.unpack(">BHI", data[4:11])
    if fmt not in FORMAT_NAMES:
        raise TcsFormatError(f"unknown format tag {fmt}")
    pos = 11
    nbytes = (k + 7) // 8
    rec_size = 12 if fmt == COMPACT else nbytes + 8
    if len(data) != pos + count * rec_size:
        raise TcsFormatError("truncated or oversized record stream")
    records = []
    for _ in range(count):
        if fmt == COMPACT:
            i, j, cost = struct.unpack(">HHQ", data[pos:pos + 12])
            mask = ((1 << (j - i + 1)) - 1) << i
        else:
            mask = int.from_bytes(data[pos:pos + nbytes], "big")
            (cost,) = struct.unpack(">Q", data[pos + nbytes:pos + rec_size])
        records.append((mask, cost))
        pos += rec_size
    return TcsStore(k, fmt, tuple(records))


# -- bit-packed payload used for the storage accounting ---------------------

def _index_bits(k: int) -> int:
    return max(1, math.ceil(math.log2(k)))


def packed_size(store: TcsStore) -> int:
    per = (2 * _index_bits(store.k) if store.fmt == COMPACT else store.k) + COST_BITS
    return per * len(store.records)


def pack_bits(store: TcsStore) -> bytes:
    """Records as a dense bit string; length is ``packed_size`` rounded up to bytes."""
    acc = 0
    nbits = 0
    ib = _index_bits(store.k)
    for mask, cost in store.records:
        if store.fmt == COMPACT:
            i, j = _interval(mask)
            fields = ((i, ib), (j, ib), (cost, COST_BITS))
        else:
            fields = ((mask, store.k), (cost, COST_BITS))
        for value, width in fields:
            acc = (acc << width) | value
            nbits += width
    pad = (-nbits) % 8
    return (acc << pad).to_bytes((nbits + pad) // 8, "big")


def unpack_bits(data: bytes, k: int, fmt: int, count: int) -> TcsStore:
    acc = int.from_bytes(data, "big")
    ib = _index_bits(k)
    widths = (ib, ib, COST_BITS) if fmt == COMPACT else (k, COST_BITS)
    per = sum(widths)
    total = per * count
    acc >>= len(data) * 8 - total
    records = []
    for r in range(count):
        chunk = (acc >> (total - per * (r + 1))) & ((1 << per) - 1)
        vals = []
        shift = per
        for w in widths:
            shift -= w
            vals.append((chunk >> shift) & ((1 << w) - 1))
        if fmt == COMPACT:
            i, j, cost = vals
            mask = ((1 << (j - i + 1)) - 1) << i
        else:
            mask, cost = vals
        records.append((mask, cost))
    return TcsStore(k, fmt, tuple(records))


def label_storage_estimate(ctx) -> dict:
    """Bits needed to store one cost per fragment label (no query support)."""
    from .dual_labels import collect_fragments

    pool = collect_fragments(ctx)
    gamma = len(ctx.W)
    sizes = ctx.block_sizes
    end_bits = 2 * math.ceil(math.log2(gamma)) if gamma > 1 else 0
    frag_bits = 0
    for lab in pool.labels:
        i, j = lab.ends
        gap_bits = math.ceil(math.log2(sizes[i])) + math.ceil(math.log2(sizes[j]))
        frag_bits += end_bits + gap_bits + gamma + COST_BITS
    cycle_bits = len(pool.cycles) * (gamma + COST_BITS)
    return {
        "fragments": len(pool.fragments),
        "whole_cycles": len(pool.cycles),
        "bits": frag_bits + cycle_bits,
        "generic_bits": len(ctx.catalog) * (ctx.G.k + COST_BITS),
    }
