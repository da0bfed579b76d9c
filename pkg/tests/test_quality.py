import random
from fractions import Fraction

import pytest

from bipden import (
    BipartiteGraph,
    Partition,
    barber_modularity,
    biclique,
    community_density,
    core_degree,
    delta_density,
    from_edge_list,
    graph_density,
    merged_ring_partition,
    partition_density,
    random_bipartite,
    ring_of_bicliques,
)
from bipden.data import southern_women
from bipden.errors import (
    AlreadyMember,
    EmptyOppositeSide,
    OverlappingPartition,
    PartitionGraphMismatch,
)


def random_hard_partition(rng, p, q, k):
    return Partition.from_labels(
        [rng.randrange(k) for _ in range(p)], [rng.randrange(k) for _ in range(q)]
    )


def count_induced(g, u_set, v_set):
    """Independent edge counter used as the oracle for density values."""
    return sum(1 for i, j in g.edges if i in u_set and j in v_set)


def test_community_density_examples():
    g = biclique(3, 4)
    assert community_density(g, range(3), range(4)) == 1.0
    assert community_density(g, {0}, set()) == 0.0

    gr, _ = ring_of_bicliques(2, 2, 4)
    # one biclique's own nodes: bridge edges leave the block, density stays 1
    assert community_density(gr, {0, 1}, {0, 1}) == 1.0


def test_partition_density_single_community_collapses_to_graph_density():
    rng = random.Random(0)
    for _ in range(10):
        g = random_bipartite(rng.randint(1, 6), rng.randint(1, 6), rng.random(), seed=rng.random())
        part = Partition.from_labels([0] * g.p, [0] * g.q)
        assert partition_density(g, part).partition_density == pytest.approx(
            graph_density(g), abs=1e-15
        )


def test_ring_ground_truth_density():
    g, truth = ring_of_bicliques(2, 2, 4)
    rep = partition_density(g, truth)
    assert rep.partition_density == pytest.approx(0.8, abs=1e-15)


def test_ring_merged_pairs_density_against_direct_count():
    g, _ = ring_of_bicliques(2, 2, 4)
    merged = merged_ring_partition(2, 2, 4, 2)
    rep = partition_density(g, merged)
    # oracle: count induced edges of each merged block directly
    total = Fraction(0)
    for c in range(merged.community_count):
        us, vs = merged.members(c)
        lc = count_induced(g, set(us), set(vs))
        total += Fraction(lc * lc, len(us) * len(vs))
    expected = total / g.edge_count
    assert expected == Fraction(81, 160)
    assert rep.partition_density == pytest.approx(float(expected), abs=1e-15)


def test_report_internal_consistency():
    rng = random.Random(1)
    for _ in range(20):
        g = random_bipartite(rng.randint(2, 7), rng.randint(2, 7), rng.uniform(0.2, 0.9), seed=rng.random())
        part = random_hard_partition(rng, g.p, g.q, rng.randint(1, 3))
        rep = partition_density(g, part)
        recon = sum(
            (c.edge_total / g.edge_count) * c.density for c in rep.per_community
        ) if g.edge_count else 0.0
        assert abs(rep.partition_density - recon) < 1e-12
        assert all(0.0 <= c.density <= 1.0 for c in rep.per_community)
        assert 0.0 <= rep.partition_density <= 1.0


def test_density_one_iff_bicliques_without_cross_edges():
    rows = [("a1", "x1"), ("a1", "x2"), ("a2", "x1"), ("a2", "x2"),
            ("b1", "y1"), ("b2", "y1")]
    g = from_edge_list(rows)
    part = Partition.from_labels([0, 0, 1, 1], [0, 1])
    assert partition_density(g, part).partition_density == 1.0
    bridged = from_edge_list(rows + [("a1", "y1")])
    assert partition_density(bridged, part).partition_density < 1.0


def test_density_invariance_under_relabeling_and_permutation():
    rng = random.Random(2)
    g = random_bipartite(6, 5, 0.5, seed=9)
    part = random_hard_partition(rng, g.p, g.q, 3)
    d0 = partition_density(g, part).partition_density

    swap = {0: 2, 1: 0, 2: 1}
    relabeled = Partition.from_labels(
        [swap[next(iter(m))] for m in part.u_memberships],
        [swap[next(iter(m))] for m in part.v_memberships],
    )
    assert partition_density(g, relabeled).partition_density == pytest.approx(d0, abs=1e-15)

    perm_u = list(range(g.p)); rng.shuffle(perm_u)
    perm_v = list(range(g.q)); rng.shuffle(perm_v)
    edges = [(perm_u[i], perm_v[j]) for i, j in g.edges]
    g2 = BipartiteGraph(g.u_ids, g.v_ids, edges)
    part2 = Partition.from_labels(
        [next(iter(part.u_memberships[perm_u.index(i)])) for i in range(g.p)],
        [next(iter(part.v_memberships[perm_v.index(j)])) for j in range(g.q)],
    )
    assert partition_density(g2, part2).partition_density == pytest.approx(d0, abs=1e-15)


def test_partition_graph_mismatch():
    g = biclique(2, 2)
    with pytest.raises(PartitionGraphMismatch):
        partition_density(g, Partition.from_labels([0], [0, 0]))


def test_core_degree():
    g = biclique(3, 4)
    assert core_degree(g, "u", 0, range(3), range(4)) == 1.0
    gr, _ = ring_of_bicliques(2, 2, 4)
    assert core_degree(gr, "u", 0, {0, 1}, {4, 5}) == 0.0
    with pytest.raises(EmptyOppositeSide):
        core_degree(g, "u", 0, {0}, set())


def test_core_degree_southern_women_a9():
    g = southern_women()
    v_set = {g.v_index(f"B{i}") for i in range(1, 9)}
    u_set = {g.u_index(f"A{i}") for i in range(1, 10)}
    # direct count: A9 attends B5, B7, B8 within B1..B8
    a9 = g.u_index("A9")
    attended = {g.v_ids[j] for j in g.adj_u[a9]}
    assert attended == {"B5", "B7", "B8", "B9"}
    assert core_degree(g, "u", a9, u_set, v_set) == pytest.approx(3 / 8)


def add_membership(part, side, index, label):
    mem_u = [set(m) for m in part.u_memberships]
    mem_v = [set(m) for m in part.v_memberships]
    (mem_u if side == "u" else mem_v)[index].add(label)
    return Partition(mem_u, mem_v)


def test_delta_density_trivial_cases():
    g, _ = ring_of_bicliques(2, 2, 4)
    part = Partition.from_labels([i // 2 for i in range(8)], [j // 2 for j in range(8)])
    # u_4 has no neighbors in block 0's V side {v0, v1}
    exact, approx = delta_density(g, part, "u", 4, 0)
    assert approx == 0.0
    assert exact < 0.0
    with pytest.raises(AlreadyMember):
        delta_density(g, part, "u", 0, 0)


def test_delta_density_matches_full_recomputation():
    rng = random.Random(3)
    checked = 0
    while checked < 500:
        g = random_bipartite(rng.randint(2, 7), rng.randint(2, 7), rng.uniform(0.2, 0.9), seed=rng.random())
        k = rng.randint(1, 3)
        part = random_hard_partition(rng, g.p, g.q, k)
        side = "u" if rng.random() < 0.5 else "v"
        idx = rng.randrange(g.p if side == "u" else g.q)
        mem = (part.u_memberships if side == "u" else part.v_memberships)[idx]
        candidates = [c for c in range(part.community_count) if c not in mem]
        if not candidates or g.edge_count == 0:
            continue
        target = rng.choice(candidates)
        exact, _ = delta_density(g, part, side, idx, target)
        before = partition_density(g, part).partition_density
        after = partition_density(g, add_membership(part, side, idx, target)).partition_density
        assert abs(exact - (after - before)) < 1e-12
        checked += 1


def test_delta_density_ring_move_dual_computation():
    g, truth = ring_of_bicliques(2, 2, 4)
    exact, _ = delta_density(g, truth, "u", 2, 0)
    before = partition_density(g, truth).partition_density
    after = partition_density(g, add_membership(truth, "u", 2, 0)).partition_density
    assert abs(exact - (after - before)) < 1e-12


def test_delta_approximation_accurate_for_large_sparse_communities():
    # planted sparse block, |U_c| >= 60, joining node with high core degree
    rng = random.Random(4)
    for _ in range(40):
        a, b = rng.randint(60, 90), rng.randint(30, 50)
        edges = set()
        target = int(rng.uniform(0.02, 0.04) * a * b)
        while len(edges) < target:
            edges.add((rng.randrange(a), rng.randrange(b)))
        x = int(rng.uniform(0.85, 1.0) * b)
        edges |= {(a, j) for j in rng.sample(range(b), x)}
        g = BipartiteGraph([f"u{i}" for i in range(a + 1)], [f"v{j}" for j in range(b)], sorted(edges))
        part = Partition.from_labels([0] * a + [1], [0] * b)
        exact, approx = delta_density(g, part, "u", a, 0)
        assert exact != 0
        assert abs(exact - approx) < 0.05 * abs(exact)


def test_barber_modularity_ring_forms():
    g, truth = ring_of_bicliques(2, 2, 12)
    q_s = barber_modularity(g, truth)
    assert q_s == pytest.approx(4 / 5 - 1 / 12, abs=1e-12)
    merged = merged_ring_partition(2, 2, 12, 2)
    q_s2 = barber_modularity(g, merged)
    assert q_s2 == pytest.approx(9 / 10 - 2 / 12, abs=1e-12)
    assert q_s2 > q_s  # s = 12 exceeds the merge threshold 2(mn+1) = 10


def test_barber_modularity_single_community_is_zero():
    g = biclique(3, 4)
    part = Partition.from_labels([0] * 3, [0] * 4)
    assert barber_modularity(g, part) == pytest.approx(0.0, abs=1e-15)


def test_barber_rejects_overlap_and_report_sets_none():
    g = biclique(2, 2)
    part = Partition([{0, 1}, {0}], [{0}, {1}])
    with pytest.raises(OverlappingPartition):
        barber_modularity(g, part)
    assert partition_density(g, part).barber_modularity is None


def test_weighted_all_ones_equals_unweighted():
    rng = random.Random(8)
    g = random_bipartite(5, 6, 0.5, seed=11)
    rows = [(g.u_ids[i], g.v_ids[j]) for i, j in g.edges]
    gw = from_edge_list([r + (1.0,) for r in rows])
    part = random_hard_partition(rng, g.p, g.q, 2)
    assert partition_density(gw, part).partition_density == pytest.approx(
        partition_density(g, part).partition_density, abs=1e-15
    )
    assert barber_modularity(gw, part) == pytest.approx(barber_modularity(g, part), abs=1e-15)


def test_weighted_delta_matches_recomputation():
    rng = random.Random(9)
    for _ in range(50):
        p, q = rng.randint(2, 5), rng.randint(2, 5)
        rows = []
        for i in range(p):
            for j in range(q):
                if rng.random() < 0.6:
                    rows.append((f"u{i}", f"v{j}", round(rng.random(), 4)))
        if not rows:
            continue
        g = from_edge_list(rows)
        part = random_hard_partition(rng, g.p, g.q, 2)
        side = "u" if rng.random() < 0.5 else "v"
        idx = rng.randrange(g.p if side == "u" else g.q)
        mem = (part.u_memberships if side == "u" else part.v_memberships)[idx]
        candidates = [c for c in range(part.community_count) if c not in mem]
        if not candidates:
            continue
        target = candidates[0]
        exact, _ = delta_density(g, part, side, idx, target)
        before = partition_density(g, part).partition_density
        after = partition_density(g, add_membership(part, side, idx, target)).partition_density
        assert abs(exact - (after - before)) < 1e-12
