"""Exhaustive maximization of partition density at desk scale.

Model 1 assigns every node to exactly one of at most k communities; Model 2
relaxes to membership sets of bounded size, scored under the overlap
convention (each community counts its own induced edges). Enumeration is
exhaustive with community labels canonicalized by first occurrence, so each
partition class is visited once; no pruning is applied. One side of the
graph is enumerated recursively and the other is scored as a vectorized
block per prefix assignment.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .bigraph import BipartiteGraph, Partition
from .errors import BudgetExceeded
from .quality import partition_density

DEFAULT_BUDGET = 10**8

# Ties below this are treated as exact: distinct partition densities of
# desk-scale graphs are rationals separated by far more than float noise.
_EQ_TOL = 1e-9

# Cap on the vectorized side's label-combination table.
_MAX_COMBOS = 2_000_000


@dataclass(frozen=True)
class ExactResult:
    best_partition: Partition
    best_d: float
    optima_count: int


def _stirling_cumulative(n: int, k: int) -> int:
    """Number of partitions of n items into at most k nonempty blocks."""
    prev = [0] * (k + 1)
    prev[0] = 1
    for _ in range(n):
        cur = [0] * (k + 1)
        for j in range(1, k + 1):
            cur[j] = prev[j - 1] + j * prev[j]
        prev = cur
        prev[0] = 0
    return sum(prev[1 : k + 1])


class _ComboTable:
    """All label vectors of length q over {0..k-1}, with per-label indicators.

    `mask(j)` keeps only rows where labels >= j open in first-occurrence
    order, which canonicalizes labels not already fixed by the other side.
    """

    def __init__(self, k: int, q: int):
        self.k, self.q = k, q
        m = k**q
        combos = np.empty((m, q), dtype=np.int16)
        for col in range(q):
            reps = k ** (q - col - 1)
            combos[:, col] = np.tile(np.repeat(np.arange(k), reps), k**col)
        self.combos = combos
        self.indicator = np.stack([(combos == c) for c in range(k)]).astype(np.float64)
        self.v_sizes = self.indicator.sum(axis=2)  # (k, m)
        present = self.indicator.astype(bool)
        first = np.where(
            present.any(axis=2), present.argmax(axis=2), q
        )  # (k, m): first column using label c, q if unused
        self.first_pos = first.T  # (m, k)
        self._masks: dict[int, np.ndarray] = {}

    def mask(self, j_used: int) -> np.ndarray:
        got = self._masks.get(j_used)
        if got is None:
            fp = self.first_pos[:, j_used:]
            if fp.shape[1] <= 1:
                got = np.ones(self.combos.shape[0], dtype=bool)
            else:
                got = np.all(fp[:, :-1] <= fp[:, 1:], axis=1)
            self._masks[j_used] = got
        return got


def _adjacency_weights(g: BipartiteGraph, transposed: bool):
    """(enumerated-side size, scored-side size, neighbor lists, weight lists)."""
    if transposed:
        return g.q, g.p, g.adj_v, g.w_v
    return g.p, g.q, g.adj_u, g.w_u


def _rgs_assignments(n: int, k: int):
    """Canonical one-label-per-node assignments: labels open in index order."""
    labels = [0] * n

    def rec(i: int, used: int):
        if i == n:
            yield tuple(labels), used
            return
        for c in range(min(used + 1, k)):
            labels[i] = c
            yield from rec(i + 1, max(used, c + 1))

    yield from rec(0, 0)


def solve_model1(g: BipartiteGraph, k: int, budget: int = DEFAULT_BUDGET) -> ExactResult:
    """Maximize partition density over hard assignments into at most k communities.

    Exhaustive up to community-label symmetry (canonical first-occurrence
    labeling); empty communities never appear in canonical form. Raises
    BudgetExceeded when the canonical assignment count would pass `budget`.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    projected = _stirling_cumulative(g.p + g.q, k)
    if projected > budget:
        raise BudgetExceeded(f"{projected} canonical assignments exceed budget {budget}")

    transposed = k**g.q > _MAX_COMBOS and k**g.p <= k**g.q
    enum_n, vec_n, enum_adj, enum_w = _adjacency_weights(g, transposed)
    if k**vec_n > _MAX_COMBOS:
        raise BudgetExceeded(
            f"label-combination table k**{vec_n} too large; reduce k or graph size"
        )
    table = _ComboTable(k, vec_n)
    grand = g.total()

    best_d = -np.inf
    best_assign = None
    optima = 0

    for enum_labels, j_used in _rgs_assignments(enum_n, k):
        # Edge totals from each scored-side node into each enumerated-side community.
        n_vc = np.zeros((vec_n, k))
        for e_node in range(enum_n):
            c = enum_labels[e_node]
            if enum_w is None:
                for s_node in enum_adj[e_node]:
                    n_vc[s_node, c] += 1.0
            else:
                for s_node, w in zip(enum_adj[e_node], enum_w[e_node]):
                    n_vc[s_node, c] += w
        e_sizes = np.bincount(enum_labels, minlength=k).astype(np.float64)

        lc = np.einsum("kmv,vk->km", table.indicator, n_vc)
        denom = e_sizes[:, None] * table.v_sizes
        with np.errstate(divide="ignore", invalid="ignore"):
            terms = np.where(denom > 0, lc * lc / np.where(denom > 0, denom, 1.0), 0.0)
        d_all = terms.sum(axis=0) / grand if grand > 0 else np.zeros(table.combos.shape[0])
        valid = table.mask(j_used)
        d_all = np.where(valid, d_all, -np.inf)

        block_max = d_all.max()
        if block_max > best_d + _EQ_TOL:
            best_d = block_max
            best_assign = (enum_labels, int(d_all.argmax()))
            optima = int((d_all >= best_d - _EQ_TOL).sum())
        elif block_max >= best_d - _EQ_TOL:
            optima += int((d_all >= best_d - _EQ_TOL).sum())

    enum_labels, combo_idx = best_assign
    vec_labels = [int(c) for c in table.combos[combo_idx]]
    if transposed:
        part = Partition.from_labels(vec_labels, list(enum_labels))
    else:
        part = Partition.from_labels(list(enum_labels), vec_labels)
    report = partition_density(g, part)
    return ExactResult(part, report.partition_density, optima)


def _membership_codes(k: int, max_memberships: int):
    """All label sets of size 1..max_memberships, in deterministic order."""
    codes = []
    for size in range(1, max_memberships + 1):
        codes.extend(frozenset(c) for c in combinations(range(k), size))
    return codes


class _SetComboTable:
    """Model-2 analogue of _ComboTable over membership-set codes."""

    def __init__(self, k: int, max_memberships: int, q: int):
        self.k, self.q = k, q
        self.codes = _membership_codes(k, max_memberships)
        n_codes = len(self.codes)
        code_ind = np.zeros((n_codes, k))
        for idx, s in enumerate(self.codes):
            for c in s:
                code_ind[idx, c] = 1.0
        m = n_codes**q
        combos = np.empty((m, q), dtype=np.int32)
        for col in range(q):
            reps = n_codes ** (q - col - 1)
            combos[:, col] = np.tile(np.repeat(np.arange(n_codes), reps), n_codes**col)
        self.combos = combos
        self.indicator = np.stack(
            [code_ind[combos, c] for c in range(k)]
        )  # (k, m, q)
        self.v_sizes = self.indicator.sum(axis=2)
        present = self.indicator.astype(bool)
        first = np.where(present.any(axis=2), present.argmax(axis=2), q)
        self.first_pos = first.T
        self._masks: dict[int, np.ndarray] = {}

    mask = _ComboTable.mask


def _set_prefix_assignments(n: int, k: int, max_memberships: int):
    """Canonical-ish membership-set assignments: fresh labels open consecutively.

    Classes where one node opens several labels at once are still visited
    more than once; optima are deduplicated downstream by community
    signature.
    """
    chosen: list[frozenset] = []

    def rec(i: int, used: int):
        if i == n:
            yield tuple(chosen), used
            return
        for base_size in range(0, max_memberships + 1):
            for base in combinations(range(used), base_size):
                max_new = min(max_memberships - base_size, k - used)
                start_new = 0 if base_size > 0 else 1
                for t in range(start_new, max_new + 1):
                    s = frozenset(base) | frozenset(range(used, used + t))
                    if not s:
                        continue
                    chosen.append(s)
                    yield from rec(i + 1, used + t)
                    chosen.pop()

    yield from rec(0, 0)


def solve_model2(
    g: BipartiteGraph, k: int, max_memberships: int, budget: int = DEFAULT_BUDGET
) -> ExactResult:
    """Maximize overlap-convention partition density over membership sets.

    Every node takes between 1 and max_memberships of the k labels. The
    returned optima count is over distinct partitions (community multisets).
    """
    if k < 1 or max_memberships < 1:
        raise ValueError("k and max_memberships must be >= 1")
    options = len(_membership_codes(k, max_memberships))
    projected = options ** (g.p + g.q)
    if projected > budget:
        raise BudgetExceeded(f"{projected} assignments exceed budget {budget}")

    transposed = options**g.q > _MAX_COMBOS and options**g.p <= options**g.q
    enum_n, vec_n, enum_adj, enum_w = _adjacency_weights(g, transposed)
    if options**vec_n > _MAX_COMBOS:
        raise BudgetExceeded(
            f"membership-combination table {options}**{vec_n} too large"
        )
    table = _SetComboTable(k, max_memberships, vec_n)
    grand = g.total()

    best_d = -np.inf
    best_rows: list[tuple[tuple[frozenset, ...], int]] = []

    for enum_sets, used in _set_prefix_assignments(enum_n, k, max_memberships):
        n_vc = np.zeros((vec_n, k))
        for e_node in range(enum_n):
            for c in enum_sets[e_node]:
                if enum_w is None:
                    for s_node in enum_adj[e_node]:
                        n_vc[s_node, c] += 1.0
                else:
                    for s_node, w in zip(enum_adj[e_node], enum_w[e_node]):
                        n_vc[s_node, c] += w
        e_sizes = np.zeros(k)
        for s in enum_sets:
            for c in s:
                e_sizes[c] += 1.0

        lc = np.einsum("kmv,vk->km", table.indicator, n_vc)
        denom = e_sizes[:, None] * table.v_sizes
        terms = np.where(denom > 0, lc * lc / np.where(denom > 0, denom, 1.0), 0.0)
        d_all = terms.sum(axis=0) / grand if grand > 0 else np.zeros(table.combos.shape[0])
        d_all = np.where(table.mask(used), d_all, -np.inf)

        block_max = d_all.max()
        if block_max > best_d + _EQ_TOL:
            best_d = block_max
            best_rows = [(enum_sets, i) for i in np.flatnonzero(d_all >= best_d - _EQ_TOL)]
        elif block_max >= best_d - _EQ_TOL:
            best_rows.extend(
                (enum_sets, i) for i in np.flatnonzero(d_all >= best_d - _EQ_TOL)
            )
        if len(best_rows) > 500_000:
            raise BudgetExceeded("degenerate instance: optimal set too large to deduplicate")

    def build(enum_sets, combo_idx) -> Partition:
        vec_sets = [table.codes[idx] for idx in table.combos[combo_idx]]
        if transposed:
            return Partition(vec_sets, list(enum_sets))
        return Partition(list(enum_sets), vec_sets)

    distinct = {}
    for enum_sets, combo_idx in best_rows:
        part = build(enum_sets, combo_idx)
        distinct.setdefault(part.community_signature(), part)
    best_part = build(*best_rows[0])
    report = partition_density(g, best_part)
    return ExactResult(best_part, report.partition_density, len(distinct))


def best_over_k(
    g: BipartiteGraph, k_max: int, budget: int = DEFAULT_BUDGET
) -> tuple[int, ExactResult]:
    """Best Model-1 result over k in 1..k_max; ties resolve to the smaller k."""
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    best_k, best = 1, solve_model1(g, 1, budget)
    for k in range(2, k_max + 1):
        res = solve_model1(g, k, budget)
        if res.best_d > best.best_d + _EQ_TOL:
            best_k, best = k, res
    return best_k, best
