"""Short-cycle structure around seed nodes.

Cycles are closed sequences of 2..5 distinct nodes, articles or
categories, with at least one edge (any kind, either direction) between
each consecutive pair.  Identity is up to rotation and reflection.  Two
per-cycle statistics characterize them: the fraction of category nodes,
and the density of edges beyond the minimum needed to close the cycle.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Iterable

import numpy as np

from .kb_graph import EdgeKind, KBGraph, NodeId, NodeKind

MIN_CYCLE_LEN = 2
MAX_CYCLE_LEN = 5


def _canonical(nodes: tuple[NodeId, ...]) -> tuple[NodeId, ...]:
    best = None
    for seq in (nodes, nodes[::-1]):
        for r in range(len(seq)):
            rot = seq[r:] + seq[:r]
            if best is None or rot < best:
                best = rot
    return best


@dataclass(frozen=True, eq=False)
class Cycle:
    nodes: tuple[NodeId, ...]

    @property
    def canonical_key(self) -> tuple[NodeId, ...]:
        return _canonical(self.nodes)

    def __len__(self) -> int:
        return len(self.nodes)

    def __eq__(self, other) -> bool:
        return isinstance(other, Cycle) and self.canonical_key == other.canonical_key

    def __hash__(self) -> int:
        return hash(self.canonical_key)


def _undirected_neighbors(g: KBGraph, i: NodeId) -> np.ndarray:
    arrays = [g.out_neighbors(i, k) for k in EdgeKind] + [
        g.in_neighbors(i, k) for k in EdgeKind
    ]
    return reduce(np.union1d, arrays)


def _edges_between(g: KBGraph, u: NodeId, v: NodeId) -> int:
    """Distinct stored edges joining u and v, all kinds, both directions."""
    count = 0
    for kind in EdgeKind:
        count += g.has_edge(u, v, kind) + g.has_edge(v, u, kind)
    return count


def enumerate_cycles(
    g: KBGraph,
    seeds: Iterable[NodeId],
    min_len: int = MIN_CYCLE_LEN,
    max_len: int = MAX_CYCLE_LEN,
) -> set[Cycle]:
    """All distinct cycles through at least one seed, by bounded DFS.

    A length-2 cycle needs two distinct edges between its nodes (a lone
    membership edge does not close one); longer cycles need one edge per
    consecutive pair, which the traversal guarantees.
    """
    if not MIN_CYCLE_LEN <= min_len <= max_len <= MAX_CYCLE_LEN:
        raise ValueError(f"cycle lengths must satisfy 2 <= min <= max <= 5, got {min_len}..{max_len}")
    found: set[Cycle] = set()
    path: list[NodeId] = []
    neighbor_cache: dict[NodeId, list[NodeId]] = {}

    def neighbors(i: NodeId) -> list[NodeId]:
        got = neighbor_cache.get(i)
        if got is None:
            got = [int(x) for x in _undirected_neighbors(g, i)]
            neighbor_cache[i] = got
        return got

    def dfs(seed: NodeId, current: NodeId, on_path: set[NodeId]) -> None:
        for nb in neighbors(current):
            if nb == seed and len(path) >= min_len:
                if len(path) > 2 or _edges_between(g, seed, current) >= 2:
                    found.add(Cycle(tuple(path)))
            if nb not in on_path and len(path) < max_len:
                path.append(nb)
                on_path.add(nb)
                dfs(seed, nb, on_path)
                on_path.remove(nb)
                path.pop()

    for seed in sorted(set(seeds)):
        path[:] = [seed]
        dfs(seed, seed, {seed})
    return found


def category_ratio(g: KBGraph, c: Cycle) -> float:
    """Fraction of the cycle's nodes that are categories."""
    n_cat = sum(1 for i in c.nodes if g.kind(i) is NodeKind.CATEGORY)
    return n_cat / len(c)


def extra_edge_density(g: KBGraph, c: Cycle) -> float:
    """Edges beyond the closing minimum, relative to the consecutive-pair maximum.

    Edges between non-consecutive nodes (chords) are not counted on
    either side of the ratio.  Same-kind pairs (article-article,
    category-category) can carry two edges, article-category pairs one.
    """
    length = len(c)
    slots = [(c.nodes[i], c.nodes[(i + 1) % length]) for i in range(length)]
    distinct: set[tuple[NodeId, NodeId, EdgeKind]] = set()
    e_max = 0
    for u, v in slots:
        e_max += 2 if g.kind(u) is g.kind(v) else 1
        for kind in EdgeKind:
            if g.has_edge(u, v, kind):
                distinct.add((u, v, kind))
            if g.has_edge(v, u, kind):
                distinct.add((v, u, kind))
    return max(0, len(distinct) - length) / e_max


def cycle_length_stats(g: KBGraph, cycles: Iterable[Cycle]) -> list[tuple[int, int, float, float]]:
    """Per-length rows: (length, count, mean category ratio, mean extra-edge density)."""
    buckets: dict[int, list[Cycle]] = {}
    for c in cycles:
        buckets.setdefault(len(c), []).append(c)
    rows = []
    for length in sorted(buckets):
        group = buckets[length]
        ratios = [category_ratio(g, c) for c in group]
        densities = [extra_edge_density(g, c) for c in group]
        rows.append(
            (length, len(group), sum(ratios) / len(group), sum(densities) / len(group))
        )
    return rows
