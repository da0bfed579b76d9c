"""BiLPA: alternating label propagation maximizing bipartite partition density.

One sweep freezes the U side, relabels every V node synchronously, then
freezes the new V labels and relabels every U node. Each node picks, among
its neighbors' labels, the community of maximum core degree (neighbor count
over community size); ties go to the label with most adjacent nodes, and
residual ties to the smallest label unless a shuffle seed is set. Sweeps
stop on the first non-improving partition density or at the sweep cap, and
the best labeling seen feeds the final membership extraction.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .bigraph import U_SIDE, V_SIDE, BipartiteGraph, Partition
from .quality import QualityReport, partition_density


@dataclass(frozen=True)
class BilpaConfig:
    """Run parameters.

    theta is the core-degree-rate threshold for final memberships; 1.0 gives
    a hard partition, smaller values admit overlapping communities. When
    tie_shuffle_seed is set, residual label ties are resolved by a seeded
    draw instead of the smallest label.
    """

    iter_max: int = 100
    theta: float = 1.0
    tie_shuffle_seed: int | None = None

    def __post_init__(self):
        if self.iter_max < 1:
            raise ValueError("iter_max must be >= 1")
        if not (0.0 < self.theta <= 1.0):
            raise ValueError("theta must lie in (0, 1]")


@dataclass(frozen=True)
class BilpaTrace:
    """Per-run diagnostics: density history and final membership state."""

    d_history: tuple[float, ...]
    sweeps_run: int
    final_labels_u: tuple[frozenset, ...]
    final_labels_v: tuple[frozenset, ...]
    rcd_u: tuple[tuple[float, ...], ...] = field(repr=False)
    rcd_v: tuple[tuple[float, ...], ...] = field(repr=False)


def _label_counts(labels) -> dict:
    counts = {}
    for lab in labels:
        if lab is not None:
            counts[lab] = counts.get(lab, 0) + 1
    return counts


def update_side(g: BipartiteGraph, side: str, fixed_labels, fixed_counts, rng=None):
    """Synchronously relabel one side against frozen opposite-side labels.

    `side` is the side being updated; `fixed_labels` / `fixed_counts` describe
    the opposite side. Nodes with no labeled neighbor get None. Unweighted
    candidate comparisons are exact (integer cross-multiplication); weighted
    graphs tally edge-weight sums instead of counts.
    """
    if side == U_SIDE:
        n_nodes, adj, wadj = g.p, g.adj_u, g.w_u
    else:
        n_nodes, adj, wadj = g.q, g.adj_v, g.w_v

    new_labels = []
    for x in range(n_nodes):
        tally = {}
        if wadj is None:
            for y in adj[x]:
                lab = fixed_labels[y]
                if lab is not None:
                    tally[lab] = tally.get(lab, 0) + 1
        else:
            for y, w in zip(adj[x], wadj[x]):
                lab = fixed_labels[y]
                if lab is not None:
                    tally[lab] = tally.get(lab, 0.0) + w
        if not tally:
            new_labels.append(None)
            continue

        # Rule I: maximum core degree tally/size, compared exactly.
        best = []
        best_num = best_den = None
        for lab, num in tally.items():
            den = fixed_counts[lab]
            if best_num is None:
                best, best_num, best_den = [lab], num, den
                continue
            lhs = num * best_den
            rhs = best_num * den
            if lhs > rhs:
                best, best_num, best_den = [lab], num, den
            elif lhs == rhs:
                best.append(lab)

        # Rule II: most adjacent nodes among the core-degree maximizers.
        if len(best) > 1:
            top = max(tally[lab] for lab in best)
            best = [lab for lab in best if tally[lab] == top]

        if len(best) == 1:
            new_labels.append(best[0])
        elif rng is None:
            new_labels.append(min(best))
        else:
            new_labels.append(rng.choice(sorted(best)))
    return new_labels


def labeling_density(g: BipartiteGraph, labels_u, labels_v) -> float:
    """Partition density of a sweep-state labeling (None labels excluded)."""
    u_count = _label_counts(labels_u)
    v_count = _label_counts(labels_v)
    edge_sum = {}
    if g.is_weighted:
        for k, (i, j) in enumerate(g.edges):
            lab = labels_u[i]
            if lab is not None and lab == labels_v[j]:
                edge_sum[lab] = edge_sum.get(lab, 0.0) + g.edge_weights[k]
    else:
        for i, j in g.edges:
            lab = labels_u[i]
            if lab is not None and lab == labels_v[j]:
                edge_sum[lab] = edge_sum.get(lab, 0) + 1
    grand = g.total()
    if grand == 0:
        return 0.0
    acc = 0.0
    for lab, s in edge_sum.items():
        acc += (s * s) / (u_count[lab] * v_count[lab])
    return acc / grand


def _core_degree_table(g: BipartiteGraph, side: str, opp_labels, opp_counts) -> list[dict]:
    """Per-node {label: core degree} against the opposite side's communities."""
    if side == U_SIDE:
        n_nodes, adj, wadj = g.p, g.adj_u, g.w_u
    else:
        n_nodes, adj, wadj = g.q, g.adj_v, g.w_v
    tables = []
    for x in range(n_nodes):
        tally = {}
        if wadj is None:
            for y in adj[x]:
                lab = opp_labels[y]
                if lab is not None:
                    tally[lab] = tally.get(lab, 0) + 1
        else:
            for y, w in zip(adj[x], wadj[x]):
                lab = opp_labels[y]
                if lab is not None:
                    tally[lab] = tally.get(lab, 0.0) + w
        tables.append({lab: num / opp_counts[lab] for lab, num in tally.items()})
    return tables


def _memberships_from_cd(cd: dict, theta: float):
    """RCD thresholding of one node's core-degree row; None if all zero."""
    if not cd:
        return None
    max_cd = max(cd.values())
    if max_cd <= 0:
        return None
    cut = theta * max_cd - 1e-12
    labs = {lab for lab, val in cd.items() if val >= cut}
    if theta >= 1.0 and len(labs) > 1:
        labs = {min(labs)}
    return labs


def extract_membership(g: BipartiteGraph, labels_u, labels_v, theta: float) -> Partition:
    """Final memberships by core-degree rate against the label communities.

    A node joins every community whose core degree is within a factor theta
    of its maximum; theta = 1.0 keeps only the maximum (smallest label on
    residual ties), which guarantees a hard partition. Nodes with no
    positive core degree (isolated ones) get fresh singleton communities.
    """
    part, _, _ = _extract_with_rcd(g, labels_u, labels_v, theta)
    return part


def _extract_with_rcd(g: BipartiteGraph, labels_u, labels_v, theta: float):
    u_count = _label_counts(labels_u)
    v_count = _label_counts(labels_v)
    cd_u = _core_degree_table(g, U_SIDE, labels_v, v_count)
    cd_v = _core_degree_table(g, V_SIDE, labels_u, u_count)

    mem_u = [_memberships_from_cd(cd, theta) for cd in cd_u]
    mem_v = [_memberships_from_cd(cd, theta) for cd in cd_v]

    used = sorted(
        set().union(*(m for m in mem_u if m), *(m for m in mem_v if m), set())
    )
    remap = {lab: k for k, lab in enumerate(used)}
    fresh = len(used)
    final_u, final_v = [], []
    for m in mem_u:
        if m is None:
            final_u.append({fresh})
            fresh += 1
        else:
            final_u.append({remap[lab] for lab in m})
    for m in mem_v:
        if m is None:
            final_v.append({fresh})
            fresh += 1
        else:
            final_v.append({remap[lab] for lab in m})
    part = Partition(final_u, final_v)

    k_total = fresh

    def rcd_rows(cd_table, finals):
        # Labels adopted by no node are dropped at compaction; their RCD
        # columns vanish with them. A node's own argmax label always survives.
        out = []
        for x, cd in enumerate(cd_table):
            row = [0.0] * k_total
            max_cd = max(cd.values()) if cd else 0.0
            if max_cd > 0:
                for lab, val in cd.items():
                    col = remap.get(lab)
                    if col is not None:
                        row[col] = val / max_cd
            else:
                row[next(iter(finals[x]))] = 1.0
            out.append(tuple(row))
        return tuple(out)

    return part, rcd_rows(cd_u, final_u), rcd_rows(cd_v, final_v)


def run(g: BipartiteGraph, cfg: BilpaConfig = BilpaConfig()) -> tuple[Partition, QualityReport, BilpaTrace]:
    """Run label propagation and return (partition, quality report, trace).

    Deterministic when tie_shuffle_seed is unset. The labeling from the
    best-density sweep (not the final, possibly worse one) feeds membership
    extraction; for hard runs the result is additionally guarded to never
    score below that best sweep.
    """
    rng = None if cfg.tie_shuffle_seed is None else random.Random(cfg.tie_shuffle_seed)

    labels_u = list(range(g.p))
    labels_v = [None] * g.q
    d_prev = 0.0
    d_history = []
    best_d = -1.0
    best_u = list(labels_u)
    best_v = list(labels_v)

    sweeps = 0
    for _ in range(cfg.iter_max):
        r_counts = _label_counts(labels_u)
        labels_v = update_side(g, V_SIDE, labels_u, r_counts, rng)
        b_counts = _label_counts(labels_v)
        labels_u = update_side(g, U_SIDE, labels_v, b_counts, rng)
        sweeps += 1
        d_t = labeling_density(g, labels_u, labels_v)
        d_history.append(d_t)
        if d_t > best_d:
            best_d = d_t
            best_u = list(labels_u)
            best_v = list(labels_v)
        if d_t <= d_prev:
            break
        d_prev = d_t

    part, rcd_u, rcd_v = _extract_with_rcd(g, best_u, best_v, cfg.theta)

    if cfg.theta >= 1.0:
        # Hard mode must not fall below the best sweep's density; if the
        # core-degree reassignment lost ground, keep the sweep labeling.
        report = partition_density(g, part)
        if report.partition_density < best_d - 1e-12:
            part = _labels_to_partition(g, best_u, best_v)
            rcd_u, rcd_v = _rcd_for_labeling(g, best_u, best_v, part)
            report = partition_density(g, part)
    else:
        report = partition_density(g, part)

    trace = BilpaTrace(
        d_history=tuple(d_history),
        sweeps_run=sweeps,
        final_labels_u=part.u_memberships,
        final_labels_v=part.v_memberships,
        rcd_u=rcd_u,
        rcd_v=rcd_v,
    )
    return part, report, trace


def _labels_to_partition(g: BipartiteGraph, labels_u, labels_v) -> Partition:
    """Hard partition straight from sweep labels; None becomes a fresh singleton."""
    used = sorted(set(_label_counts(labels_u)) | set(_label_counts(labels_v)))
    remap = {lab: k for k, lab in enumerate(used)}
    fresh = len(used)
    mem_u, mem_v = [], []
    for lab in labels_u:
        if lab is None:
            mem_u.append({fresh})
            fresh += 1
        else:
            mem_u.append({remap[lab]})
    for lab in labels_v:
        if lab is None:
            mem_v.append({fresh})
            fresh += 1
        else:
            mem_v.append({remap[lab]})
    return Partition(mem_u, mem_v)


def _rcd_for_labeling(g: BipartiteGraph, labels_u, labels_v, part: Partition):
    """RCD rows aligned to the labels of `_labels_to_partition(labels_u, labels_v)`."""
    u_count = _label_counts(labels_u)
    v_count = _label_counts(labels_v)
    cd_u = _core_degree_table(g, U_SIDE, labels_v, v_count)
    cd_v = _core_degree_table(g, V_SIDE, labels_u, u_count)
    used = sorted(set(u_count) | set(v_count))
    remap = {lab: k for k, lab in enumerate(used)}
    k_total = part.community_count

    def rows(cd_table, memberships):
        out = []
        for x, cd in enumerate(cd_table):
            row = [0.0] * k_total
            max_cd = max(cd.values()) if cd else 0.0
            if max_cd > 0:
                for lab, val in cd.items():
                    row[remap[lab]] = val / max_cd
            else:
                row[next(iter(memberships[x]))] = 1.0
            out.append(tuple(row))
        return tuple(out)

    return rows(cd_u, part.u_memberships), rows(cd_v, part.v_memberships)


def rearrange_matrix(g: BipartiteGraph, part: Partition) -> tuple[list[int], list[int]]:
    """Row and column orders grouping nodes by community label.

    Rows (U) and columns (V) are grouped by ascending label, stably by
    original index; overlap nodes sort under their smallest label. Applied
    to the adjacency matrix this exposes the block-diagonal structure.
    """
    row_order = sorted(range(g.p), key=lambda i: (min(part.u_memberships[i]), i))
    col_order = sorted(range(g.q), key=lambda j: (min(part.v_memberships[j]), j))
    return row_order, col_order
