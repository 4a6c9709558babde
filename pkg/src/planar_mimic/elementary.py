"""Elementary cutsets and the decomposition of minimum terminal cutsets.

A minimum cutset ``E_S`` is elementary when removing it leaves exactly two
components.  Every minimum cutset is a disjoint union of elementary ones;
:func:`decompose` peels them off one leaf component at a time.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

from .graph import PlanarGraph
from .mincut import (Cutset, boundary, canonical, check_subset, components, full_mask,
                     mask_of, min_terminal_cut)

DEFAULT_GUARD_K = 16


class GuardError(ValueError):
    """Instance too large for exhaustive enumeration."""


class ConsistencyError(AssertionError):
    """An internal identity failed; indicates a bug, not bad input."""


class TerminalMismatch(ValueError):
    pass


@dataclass(frozen=True)
class ElementaryCatalog:
    k: int
    entries: tuple[Cutset, ...]  # sorted by canonical mask

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    @property
    def masks(self) -> tuple[int, ...]:
        return tuple(c.mask for c in self.entries)

    def lookup(self, S: int) -> Cutset | None:
        key = canonical(S, self.k)
        for c in self.entries:
            if c.mask == key:
                return c
        return None

    def export_lines(self) -> list[str]:
        width = max(1, (self.k + 3) // 4)
        return [f"{c.mask:0{width}x} {c.cost} " + ",".join(map(str, sorted(c.edges)))
                for c in self.entries]


@dataclass(frozen=True)
class Decomposition:
    S: int
    parts: tuple[int, ...]
    cutsets: tuple[Cutset, ...]

    @property
    def cost(self) -> int:
        return sum(c.cost for c in self.cutsets)


def is_elementary(G: PlanarGraph, S: int) -> bool:
    check_subset(G, S)
    return len(components(G, min_terminal_cut(G, S).edges)) == 2


def enumerate_elementary(G: PlanarGraph, guard_k: int = DEFAULT_GUARD_K) -> ElementaryCatalog:
    if G.k > guard_k:
        raise GuardError(f"k={G.k} exceeds enumeration guard {guard_k}")
    found = []
    # canonical masks have the top terminal bit clear
    for S in range(1, 1 << (G.k - 1)):
        if is_elementary(G, S):
            found.append(min_terminal_cut(G, S))
    return ElementaryCatalog(G.k, tuple(found))


def find_elementary_component(G: PlanarGraph, cut_edges) -> frozenset[int]:
    """A component of ``G - cut_edges`` whose boundary is elementary.

    Components are contracted to nodes; any leaf of a spanning tree of the
    contracted graph works, and the lowest-numbered leaf is returned.
    """
    part = components(G, cut_edges)
    if len(part) == 2:
        return part.components[0]
    where = part.index_of()
    adj: dict[int, set[int]] = {i: set() for i in range(len(part))}
    for e in cut_edges:
        a, b = (where[x] for x in G.endpoints(e))
        if a != b:
            adj[a].add(b)
            adj[b].add(a)
    degree = [0] * len(part)
    seen = {0}
    q = deque([0])
    while q:
        x = q.popleft()
        for y in sorted(adj[x]):
            if y not in seen:
                seen.add(y)
                degree[x] += 1
                degree[y] += 1
                q.append(y)
    leaf = min(i for i in range(len(part)) if degree[i] == 1)
    return part.components[leaf]


def decompose(G: PlanarGraph, S: int) -> Decomposition:
    """Split ``E_S`` into pairwise disjoint elementary cutsets."""
    check_subset(G, S)
    full = full_mask(G.k)
    cur = S
    remaining = set(min_terminal_cut(G, S).edges)
    parts: list[int] = []
    cuts: list[Cutset] = []
    while 0 < cur < full:
        C = find_elementary_component(G, remaining)
        piece = mask_of(G, C)
        delta = boundary(G, C)
        elem = min_terminal_cut(G, piece)
        if elem.edges != delta or not delta <= remaining:
            raise ConsistencyError(f"boundary of peeled component is not E_{piece:#x}")
        parts.append(elem.mask)
        cuts.append(elem)
        remaining -= delta
        # move C's terminals to the other side
        cur ^= piece
        if 0 < cur < full and min_terminal_cut(G, cur).edges != frozenset(remaining):
            raise ConsistencyError(f"E_{cur:#x} differs from the remaining cutset")
    if remaining:
        raise ConsistencyError("cutset not exhausted by the decomposition")
    return Decomposition(S, tuple(parts), tuple(cuts))


@dataclass
class SparsifierReport:
    q: Fraction
    mode: str
    checked: int = 0
    violations: list[tuple[int, int, int]] = field(default_factory=list)  # (S, G cost, H cost)
    elementary_mismatch: list[int] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations and not self.elementary_mismatch


def check_sparsifier(G: PlanarGraph, H: PlanarGraph, q=1, mode: str = "all",
                     guard_k: int = DEFAULT_GUARD_K) -> SparsifierReport:
    """Check ``mincut_G(S) <= mincut_H(S) <= q * mincut_G(S)``.

    ``mode='elementary'`` checks that both graphs have the same elementary
    sets and the inequality on those only; ``mode='all'`` checks every S.
    """
    if G.k != H.k:
        raise TerminalMismatch(f"terminal counts differ ({G.k} vs {H.k})")
    if G.k > guard_k:
        raise GuardError(f"k={G.k} exceeds guard {guard_k}")
    q = Fraction(q)
    if q < 1:
        raise ValueError("quality must be at least 1")
    report = SparsifierReport(q, mode)
    if mode == "elementary":
        eg = set(enumerate_elementary(G, guard_k).masks)
        eh = set(enumerate_elementary(H, guard_k).masks)
        report.elementary_mismatch = sorted(eg ^ eh)
        masks = sorted(eg)
    elif mode == "all":
        masks = range(1, 1 << (G.k - 1))
    else:
        raise ValueError(f"unknown mode {mode!r}")
    for S in masks:
        cg = min_terminal_cut(G, S).cost
        ch = min_terminal_cut(H, S).cost
        report.checked += 1
        if not cg <= ch <= q * cg:
            report.violations.append((S, cg, ch))
    return report
