"""Synthetic benchmark constructors with known ground-truth partitions.

Families: single bicliques, rings of bicliques bridged by single edges,
the four-biclique resolution-limit network, chains of bicliques sharing
single nodes, and seeded random bipartite graphs.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .bigraph import BipartiteGraph, Partition
from .errors import InvalidChain, InvalidParams


@dataclass(frozen=True)
class ClosedFormParams:
    """(m, n, s, k) parameters for the ring-of-bicliques closed forms.

    m, n are biclique side sizes, s the number of bicliques in the ring,
    and k the merge factor (k consecutive bicliques per merged community).
    """

    m: int
    n: int
    s: int
    k: int = 2

    def validate(self) -> None:
        if self.m < 2 or self.n < 2:
            raise InvalidParams("biclique sides m, n must be >= 2")
        if self.s < 4:
            raise InvalidParams("ring closed forms need s >= 4")
        if self.k < 2 or self.s % self.k != 0 or self.k >= self.s:
            raise InvalidParams("merge factor k must satisfy 2 <= k < s and k | s")


def biclique(m: int, n: int) -> BipartiteGraph:
    """Complete bipartite graph B(m, n): density 1, m*n edges."""
    if m < 1 or n < 1:
        raise InvalidParams("biclique sides must be >= 1")
    edges = [(i, j) for i in range(m) for j in range(n)]
    return BipartiteGraph([f"u{i}" for i in range(m)], [f"v{j}" for j in range(n)], edges)


def ring_of_bicliques(m: int, n: int, s: int) -> tuple[BipartiteGraph, Partition]:
    """Ring of s copies of B(m, n), adjacent copies joined by one edge.

    Bridge endpoints are the first U node of block i and the first V node of
    block i+1 (mod s). Total (m+n)*s nodes and (m*n+1)*s edges. The returned
    ground truth assigns one community per biclique.
    """
    if m < 2 or n < 2 or s < 3:
        raise InvalidParams("ring needs m, n >= 2 and s >= 3")
    edges = []
    for blk in range(s):
        u0, v0 = blk * m, blk * n
        for i in range(m):
            for j in range(n):
                edges.append((u0 + i, v0 + j))
        edges.append((u0, ((blk + 1) % s) * n))
    g = BipartiteGraph(
        [f"u{i}" for i in range(m * s)], [f"v{j}" for j in range(n * s)], edges
    )
    truth = Partition.from_labels(
        [i // m for i in range(m * s)], [j // n for j in range(n * s)]
    )
    return g, truth


def merged_ring_partition(m: int, n: int, s: int, k: int) -> Partition:
    """Ring partition grouping k consecutive bicliques per community."""
    if s % k != 0:
        raise InvalidParams("k must divide s")
    return Partition.from_labels(
        [(i // m) // k for i in range(m * s)], [(j // n) // k for j in range(n * s)]
    )


def four_biclique_network(m: int, n: int) -> tuple[BipartiteGraph, Partition]:
    """Two B(n, n) and two B(m, m) joined in an open chain by three edges.

    Blocks are ordered large, large, small, small; bridge t runs from the
    first U node of block t to the first V node of block t+1, so the degree
    totals per block are (U, V) = (n^2+1, n^2), (n^2+1, n^2+1),
    (m^2+1, m^2+1), (m^2, m^2+1). Edge total is 2n^2 + 2m^2 + 3.
    """
    if not (2 <= m <= n):
        raise InvalidParams("four-biclique network needs 2 <= m <= n")
    sizes = [n, n, m, m]
    u_off, v_off = [], []
    pos_u = pos_v = 0
    for sz in sizes:
        u_off.append(pos_u)
        v_off.append(pos_v)
        pos_u += sz
        pos_v += sz
    edges = []
    for blk, sz in enumerate(sizes):
        for i in range(sz):
            for j in range(sz):
                edges.append((u_off[blk] + i, v_off[blk] + j))
    for blk in range(3):
        edges.append((u_off[blk], v_off[blk + 1]))
    g = BipartiteGraph(
        [f"u{i}" for i in range(pos_u)], [f"v{j}" for j in range(pos_v)], edges
    )
    labels_u, labels_v = [], []
    for blk, sz in enumerate(sizes):
        labels_u.extend([blk] * sz)
        labels_v.extend([blk] * sz)
    return g, Partition.from_labels(labels_u, labels_v)


def merged_four_biclique_partition(m: int, n: int) -> Partition:
    """Four-biclique partition with the two small blocks merged."""
    sizes = [n, n, m, m]
    labels_u, labels_v = [], []
    for blk, sz in enumerate(sizes):
        lab = min(blk, 2)
        labels_u.extend([lab] * sz)
        labels_v.extend([lab] * sz)
    return Partition.from_labels(labels_u, labels_v)


def chain_of_bicliques(sizes) -> tuple[BipartiteGraph, Partition]:
    """Chain of bicliques B(s_i, t_i) where adjacent bicliques share one node.

    The shared node's side alternates along the chain (U for the first link,
    then V, ...), keeping the graph bipartite. Node total is
    sum(s_i + t_i) - K + 1 and edge total sum(s_i * t_i). Ground truth puts
    each biclique in its own community with shared nodes in both.
    """
    sizes = [(int(a), int(b)) for a, b in sizes]
    if len(sizes) < 2:
        raise InvalidChain("a chain needs at least two bicliques")
    if any(a < 1 or b < 1 for a, b in sizes):
        raise InvalidChain("every biclique side must be >= 1")

    u_ids, v_ids = [], []
    u_mem, v_mem = [], []
    edges = []

    def new_u(label):
        u_ids.append(f"u{len(u_ids)}")
        u_mem.append({label})
        return len(u_ids) - 1

    def new_v(label):
        v_ids.append(f"v{len(v_ids)}")
        v_mem.append({label})
        return len(v_ids) - 1

    shared_from_prev = None  # (side, index) inherited by the current biclique
    for blk, (su, tv) in enumerate(sizes):
        us, vs = [], []
        if shared_from_prev is not None:
            side, idx = shared_from_prev
            if side == "u":
                us.append(idx)
                u_mem[idx].add(blk)
            else:
                vs.append(idx)
                v_mem[idx].add(blk)
        while len(us) < su:
            us.append(new_u(blk))
        while len(vs) < tv:
            vs.append(new_v(blk))
        for i in us:
            for j in vs:
                edges.append((i, j))
        if blk < len(sizes) - 1:
            share_side = "u" if blk % 2 == 0 else "v"
            shared_from_prev = ("u", us[-1]) if share_side == "u" else ("v", vs[-1])

    g = BipartiteGraph(u_ids, v_ids, edges)
    return g, Partition(u_mem, v_mem)


def random_bipartite(p: int, q: int, edge_probability: float, seed=None) -> BipartiteGraph:
    """Each of the p*q possible edges present independently; seeded and repeatable."""
    if not (0.0 <= edge_probability <= 1.0):
        raise InvalidParams("edge probability must lie in [0, 1]")
    rng = random.Random(seed)
    edges = [
        (i, j)
        for i in range(p)
        for j in range(q)
        if rng.random() < edge_probability
    ]
    return BipartiteGraph([f"u{i}" for i in range(p)], [f"v{j}" for j in range(q)], edges)
