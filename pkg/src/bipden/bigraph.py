"""Bipartite graph and partition types, edge-list ingestion, elementary measures.

A graph holds two disjoint node sets U and V with edges only across sides.
Nodes carry external ids (strings or ints); all algorithms work on dense
0-based per-side indices, with the id map retained for output.
"""

from __future__ import annotations

import io
from typing import Iterable, Sequence

from .errors import (
    DuplicateEdge,
    EdgeListFormatError,
    EmptySide,
    IndexOutOfRange,
    WeightOutOfRange,
)

U_SIDE = "u"
V_SIDE = "v"


class BipartiteGraph:
    """Immutable bipartite graph with optional per-edge weights in [0, 1].

    Attributes
    ----------
    p, q : int
        Number of U-side and V-side nodes.
    u_ids, v_ids : tuple
        External ids in index order.
    edge_count : int
        Number of edges.
    weight_total : float or None
        Sum of edge weights; None for unweighted graphs.
    """

    __slots__ = (
        "u_ids", "v_ids", "_u_index", "_v_index",
        "adj_u", "adj_v", "w_u", "w_v",
        "edges", "edge_weights", "edge_count", "weight_total",
    )

    def __init__(self, u_ids, v_ids, edges, weights=None):
        """Build from id lists and (u_index, v_index) pairs.

        `weights` is either None (unweighted) or a sequence parallel to
        `edges`. Duplicate pairs and out-of-range weights are rejected.
        """
        self.u_ids = tuple(u_ids)
        self.v_ids = tuple(v_ids)
        if not self.u_ids or not self.v_ids:
            raise EmptySide("graph needs at least one node on each side")
        self._u_index = {uid: i for i, uid in enumerate(self.u_ids)}
        self._v_index = {vid: j for j, vid in enumerate(self.v_ids)}
        if len(self._u_index) != len(self.u_ids) or len(self._v_index) != len(self.v_ids):
            raise EdgeListFormatError("node ids must be unique per side")

        edge_list = [(int(i), int(j)) for i, j in edges]
        seen = set()
        for i, j in edge_list:
            if not (0 <= i < self.p and 0 <= j < self.q):
                raise IndexOutOfRange(f"edge ({i}, {j}) outside graph bounds")
            if (i, j) in seen:
                raise DuplicateEdge(f"edge ({self.u_ids[i]!r}, {self.v_ids[j]!r}) repeated")
            seen.add((i, j))
        self.edges = tuple(edge_list)
        self.edge_count = len(self.edges)

        if weights is None:
            self.edge_weights = None
            self.weight_total = None
        else:
            ws = [float(w) for w in weights]
            if len(ws) != len(edge_list):
                raise EdgeListFormatError("weights must parallel edges")
            for w in ws:
                if not (0.0 <= w <= 1.0):
                    raise WeightOutOfRange(f"weight {w} outside [0, 1]")
            self.edge_weights = tuple(ws)
            self.weight_total = sum(ws)

        adj_u = [[] for _ in range(self.p)]
        adj_v = [[] for _ in range(self.q)]
        w_u = [[] for _ in range(self.p)] if weights is not None else None
        w_v = [[] for _ in range(self.q)] if weights is not None else None
        for k, (i, j) in enumerate(self.edges):
            adj_u[i].append(j)
            adj_v[j].append(i)
            if w_u is not None:
                w_u[i].append(self.edge_weights[k])
                w_v[j].append(self.edge_weights[k])
        self.adj_u = tuple(tuple(a) for a in adj_u)
        self.adj_v = tuple(tuple(a) for a in adj_v)
        self.w_u = tuple(tuple(a) for a in w_u) if w_u is not None else None
        self.w_v = tuple(tuple(a) for a in w_v) if w_v is not None else None

    @property
    def p(self) -> int:
        return len(self.u_ids)

    @property
    def q(self) -> int:
        return len(self.v_ids)

    @property
    def is_weighted(self) -> bool:
        return self.edge_weights is not None

    def total(self) -> float:
        """Edge total used by density formulas: L for unweighted, W for weighted."""
        return self.weight_total if self.is_weighted else self.edge_count

    def degree(self, side: str, index: int) -> int:
        self._check_index(side, index)
        return len(self.adj_u[index] if side == U_SIDE else self.adj_v[index])

    def weighted_degree(self, side: str, index: int) -> float:
        self._check_index(side, index)
        if not self.is_weighted:
            return float(self.degree(side, index))
        ws = self.w_u[index] if side == U_SIDE else self.w_v[index]
        return sum(ws)

    def has_edge(self, i: int, j: int) -> bool:
        return j in self.adj_u[i]

    def u_index(self, uid) -> int:
        return self._u_index[uid]

    def v_index(self, vid) -> int:
        return self._v_index[vid]

    def _check_index(self, side: str, index: int) -> None:
        n = self.p if side == U_SIDE else self.q
        if not (0 <= index < n):
            raise IndexOutOfRange(f"index {index} invalid for side {side!r} (size {n})")

    def __repr__(self):
        tag = "weighted " if self.is_weighted else ""
        return f"<BipartiteGraph {tag}p={self.p} q={self.q} L={self.edge_count}>"


class Partition:
    """Per-node community memberships; sets allow overlapping communities.

    Labels are compacted to contiguous integers 0..K-1 preserving ascending
    order of the input labels. Every node must carry at least one label.
    """

    __slots__ = ("u_memberships", "v_memberships", "community_count")

    def __init__(self, u_memberships: Iterable[Iterable[int]], v_memberships: Iterable[Iterable[int]]):
        raw_u = [frozenset(int(c) for c in m) for m in u_memberships]
        raw_v = [frozenset(int(c) for c in m) for m in v_memberships]
        for k, mem in enumerate(raw_u):
            if not mem:
                raise ValueError(f"u node {k} has no community label")
        for k, mem in enumerate(raw_v):
            if not mem:
                raise ValueError(f"v node {k} has no community label")
        used = sorted(set().union(*raw_u, *raw_v)) if (raw_u or raw_v) else []
        remap = {c: k for k, c in enumerate(used)}
        self.u_memberships = tuple(frozenset(remap[c] for c in m) for m in raw_u)
        self.v_memberships = tuple(frozenset(remap[c] for c in m) for m in raw_v)
        self.community_count = len(used)

    @classmethod
    def from_labels(cls, u_labels: Sequence[int], v_labels: Sequence[int]) -> "Partition":
        """Hard partition from one label per node."""
        return cls([{c} for c in u_labels], [{c} for c in v_labels])

    @property
    def p(self) -> int:
        return len(self.u_memberships)

    @property
    def q(self) -> int:
        return len(self.v_memberships)

    @property
    def is_hard(self) -> bool:
        return all(len(m) == 1 for m in self.u_memberships) and \
            all(len(m) == 1 for m in self.v_memberships)

    def members(self, label: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """(U indices, V indices) carrying `label`."""
        us = tuple(i for i, m in enumerate(self.u_memberships) if label in m)
        vs = tuple(j for j, m in enumerate(self.v_memberships) if label in m)
        return us, vs

    def overlap_nodes(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """(U indices, V indices) belonging to more than one community."""
        us = tuple(i for i, m in enumerate(self.u_memberships) if len(m) > 1)
        vs = tuple(j for j, m in enumerate(self.v_memberships) if len(m) > 1)
        return us, vs

    def community_signature(self) -> frozenset:
        """Label-free fingerprint: the multiset of (U set, V set) communities."""
        sigs = {}
        for c in range(self.community_count):
            us, vs = self.members(c)
            key = (frozenset(us), frozenset(vs))
            sigs[key] = sigs.get(key, 0) + 1
        return frozenset(sigs.items())

    def __eq__(self, other):
        if not isinstance(other, Partition):
            return NotImplemented
        return self.community_signature() == other.community_signature() and \
            self.p == other.p and self.q == other.q

    def __hash__(self):
        return hash((self.p, self.q, self.community_signature()))

    def __repr__(self):
        kind = "hard" if self.is_hard else "overlapping"
        return f"<Partition {kind} K={self.community_count} p={self.p} q={self.q}>"


def from_edge_list(rows) -> BipartiteGraph:
    """Build a graph from (u_id, v_id) or (u_id, v_id, weight) rows.

    Indices are assigned in first-appearance order per side. The graph is
    weighted as soon as any row carries a weight; rows without one then
    default to weight 1.0.
    """
    u_ids, v_ids = [], []
    u_index, v_index = {}, {}
    edges = []
    weights = []
    any_weight = False
    for row in rows:
        if len(row) == 2:
            uid, vid = row
            w = None
        elif len(row) == 3:
            uid, vid, w = row
        else:
            raise EdgeListFormatError(f"row {row!r} must have 2 or 3 fields")
        if uid not in u_index:
            u_index[uid] = len(u_ids)
            u_ids.append(uid)
        if vid not in v_index:
            v_index[vid] = len(v_ids)
            v_ids.append(vid)
        edges.append((u_index[uid], v_index[vid]))
        if w is not None:
            any_weight = True
        weights.append(w)
    if not u_ids or not v_ids:
        raise EmptySide("edge list produced an empty side")
    if any_weight:
        weights = [1.0 if w is None else float(w) for w in weights]
        return BipartiteGraph(u_ids, v_ids, edges, weights)
    return BipartiteGraph(u_ids, v_ids, edges)


def parse_edge_list(text_or_lines) -> list[tuple]:
    """Parse the standard edge-list format into rows for `from_edge_list`.

    One edge per line, whitespace- or tab-separated `u_id v_id [weight]`;
    lines starting with `#` (and blank lines) are skipped.
    """
    if isinstance(text_or_lines, str):
        lines = io.StringIO(text_or_lines)
    else:
        lines = text_or_lines
    rows = []
    for lineno, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        parts = stripped.split()
        if len(parts) == 2:
            rows.append((parts[0], parts[1]))
        elif len(parts) == 3:
            try:
                w = float(parts[2])
            except ValueError as exc:
                raise EdgeListFormatError(f"line {lineno}: bad weight {parts[2]!r}") from exc
            rows.append((parts[0], parts[1], w))
        else:
            raise EdgeListFormatError(f"line {lineno}: expected 2 or 3 fields, got {len(parts)}")
    return rows


def read_edge_list(path) -> BipartiteGraph:
    """Load a graph from an edge-list file (UTF-8)."""
    with open(path, encoding="utf-8") as fh:
        return from_edge_list(parse_edge_list(fh))


def write_edge_list(g: BipartiteGraph, fh) -> None:
    """Serialize in stored edge order so round trips are byte-stable."""
    for k, (i, j) in enumerate(g.edges):
        if g.is_weighted:
            fh.write(f"{g.u_ids[i]}\t{g.v_ids[j]}\t{g.edge_weights[k]!r}\n")
        else:
            fh.write(f"{g.u_ids[i]}\t{g.v_ids[j]}\n")


def graph_density(g: BipartiteGraph) -> float:
    """Fraction of possible cross-edges present: L/(p*q), or W/(p*q) weighted."""
    return g.total() / (g.p * g.q)


def neighbors(g: BipartiteGraph, side: str, index: int) -> set[int]:
    """Opposite-side indices adjacent to the given node."""
    g._check_index(side, index)
    adj = g.adj_u if side == U_SIDE else g.adj_v
    return set(adj[index])
