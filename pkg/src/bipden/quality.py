"""Quantitative functions for (graph, partition) pairs.

Partition density D is the edge-weighted average of per-community densities

    D = sum_c (L_c / L) * D_c,      D_c = L_c / (|U_c| * |V_c|),

with weight sums W_c, W replacing edge counts on weighted graphs. Degenerate
communities (empty side, or no induced edges) contribute 0. For overlapping
partitions the same formula is applied with each community counting its own
induced edges, even if an edge is induced by more than one community.
"""

from __future__ import annotations

from dataclasses import dataclass

from .bigraph import U_SIDE, V_SIDE, BipartiteGraph, Partition
from .errors import (
    AlreadyMember,
    EmptyOppositeSide,
    OverlappingPartition,
    PartitionGraphMismatch,
)


@dataclass(frozen=True)
class CommunityStats:
    label: int
    edge_total: float  # L_c, or W_c on weighted graphs
    u_size: int
    v_size: int
    density: float


@dataclass(frozen=True)
class QualityReport:
    """Partition density, per-community breakdown, and Barber modularity.

    `barber_modularity` is None for overlapping partitions, where the
    degree-product form is undefined.
    """

    partition_density: float
    per_community: tuple[CommunityStats, ...]
    barber_modularity: float | None

    def to_text(self) -> str:
        lines = [
            f"partition_density\t{self.partition_density!r}",
            f"community_count\t{len(self.per_community)}",
        ]
        if self.barber_modularity is None:
            lines.append("barber_modularity\tundefined (overlapping partition)")
        else:
            lines.append(f"barber_modularity\t{self.barber_modularity!r}")
        return "\n".join(lines) + "\n"

    def to_rows(self) -> str:
        """One community per line: label, edge total, |U_c|, |V_c|, D_c."""
        out = ["#label\tedges\tu_size\tv_size\tdensity"]
        for c in self.per_community:
            out.append(f"{c.label}\t{c.edge_total!r}\t{c.u_size}\t{c.v_size}\t{c.density!r}")
        return "\n".join(out) + "\n"


def _check_cover(g: BipartiteGraph, part: Partition) -> None:
    if part.p != g.p or part.q != g.q:
        raise PartitionGraphMismatch(
            f"partition covers ({part.p}, {part.q}) nodes, graph has ({g.p}, {g.q})"
        )


def community_density(g: BipartiteGraph, u_set, v_set) -> float:
    """Density of the subgraph induced by (u_set, v_set); 0/0 is defined as 0."""
    u_set = set(u_set)
    v_set = set(v_set)
    for i in u_set:
        g._check_index(U_SIDE, i)
    for j in v_set:
        g._check_index(V_SIDE, j)
    if not u_set or not v_set:
        return 0.0
    total = 0.0
    for i in u_set:
        if g.is_weighted:
            for j, w in zip(g.adj_u[i], g.w_u[i]):
                if j in v_set:
                    total += w
        else:
            total += sum(1 for j in g.adj_u[i] if j in v_set)
    return total / (len(u_set) * len(v_set))


def _community_edge_total(g: BipartiteGraph, u_set: set, v_set: set) -> float:
    """Induced edge count (or weight sum) between u_set and v_set."""
    total = 0.0
    for i in u_set:
        if g.is_weighted:
            for j, w in zip(g.adj_u[i], g.w_u[i]):
                if j in v_set:
                    total += w
        else:
            total += sum(1 for j in g.adj_u[i] if j in v_set)
    return total


def partition_density(g: BipartiteGraph, part: Partition) -> QualityReport:
    """Evaluate a partition, returning density, community stats, and Barber Q."""
    _check_cover(g, part)
    grand = g.total()
    stats = []
    acc = 0.0
    for c in range(part.community_count):
        us, vs = part.members(c)
        u_set, v_set = set(us), set(vs)
        if u_set and v_set:
            lc = _community_edge_total(g, u_set, v_set)
            dc = lc / (len(u_set) * len(v_set))
        else:
            lc, dc = 0.0, 0.0
        stats.append(CommunityStats(c, lc, len(u_set), len(v_set), dc))
        if grand > 0:
            acc += (lc / grand) * dc
    barber = barber_modularity(g, part) if part.is_hard else None
    return QualityReport(acc, tuple(stats), barber)


def core_degree(g: BipartiteGraph, side: str, index: int, u_set, v_set) -> float:
    """Fraction of the community's opposite side adjacent to the node.

    For a U node: |N(u) cap V_c| / |V_c|. Weighted graphs put the weight sum
    of the intersecting edges in the numerator over the same count denominator.
    """
    g._check_index(side, index)
    opposite = set(v_set) if side == U_SIDE else set(u_set)
    if not opposite:
        raise EmptyOppositeSide(f"community has no {('V' if side == U_SIDE else 'U')}-side nodes")
    if side == U_SIDE:
        adj, ws = g.adj_u[index], (g.w_u[index] if g.is_weighted else None)
    else:
        adj, ws = g.adj_v[index], (g.w_v[index] if g.is_weighted else None)
    if ws is None:
        hits = sum(1 for n in adj if n in opposite)
        return hits / len(opposite)
    return sum(w for n, w in zip(adj, ws) if n in opposite) / len(opposite)


def delta_density(
    g: BipartiteGraph, part: Partition, side: str, index: int, target_label: int
) -> tuple[float, float]:
    """Density change from adding a node to a community: (exact, approx).

    exact uses the true incremented denominator; approx keeps the community
    size fixed, which is accurate only when the node joins a large, sparse
    community with high core degree.
    """
    _check_cover(g, part)
    g._check_index(side, index)
    mem = part.u_memberships[index] if side == U_SIDE else part.v_memberships[index]
    if target_label in mem:
        raise AlreadyMember(f"{side} node {index} already in community {target_label}")
    us, vs = part.members(target_label)
    u_set, v_set = set(us), set(vs)
    grand = g.total()
    lc = _community_edge_total(g, u_set, v_set)

    if side == U_SIDE:
        adj = g.adj_u[index]
        ws = g.w_u[index] if g.is_weighted else None
        if ws is None:
            x = sum(1 for j in adj if j in v_set)
        else:
            x = sum(w for j, w in zip(adj, ws) if j in v_set)
        own, opp = len(u_set), len(v_set)
    else:
        adj = g.adj_v[index]
        ws = g.w_v[index] if g.is_weighted else None
        if ws is None:
            x = sum(1 for i in adj if i in u_set)
        else:
            x = sum(w for i, w in zip(adj, ws) if i in u_set)
        own, opp = len(v_set), len(u_set)

    if opp == 0:
        # Joining a one-sided community never induces edges; only the (still
        # degenerate) community grows, so the density is unchanged.
        return 0.0, 0.0
    old_term = (lc * lc) / (own * opp) if own else 0.0
    exact = ((lc + x) ** 2 / ((own + 1) * opp) - old_term) / grand
    approx = (x * (2 * lc + x)) / (own * opp) / grand if own else exact
    return exact, approx


def barber_modularity(g: BipartiteGraph, part: Partition) -> float:
    """Bipartite modularity in per-community degree-product form.

    Q = sum_c [ L_c/L - (d^U_c/L)(d^V_c/L) ] with d^U_c, d^V_c the total
    graph degrees of the community's U-side and V-side nodes. Hard
    partitions only.
    """
    _check_cover(g, part)
    if not part.is_hard:
        raise OverlappingPartition("Barber modularity is undefined for overlapping partitions")
    grand = g.total()
    if grand == 0:
        return 0.0
    q_total = 0.0
    for c in range(part.community_count):
        us, vs = part.members(c)
        u_set, v_set = set(us), set(vs)
        lc = _community_edge_total(g, u_set, v_set) if (u_set and v_set) else 0.0
        du = sum(g.weighted_degree(U_SIDE, i) for i in u_set)
        dv = sum(g.weighted_degree(V_SIDE, j) for j in v_set)
        q_total += lc / grand - (du / grand) * (dv / grand)
    return q_total
