import random
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import DOUBLE_TRIANGLE, random_connected
from sieve.components import Component, decompose
from sieve.graph import SparseGraph
from sieve.objectives import (
    Partition,
    canonical_labels,
    component_partitions,
    eval_Q,
    eval_Q_exact,
    eval_S_component,
    eval_S_component_alt,
    eval_S_global,
    global_assignment,
    labels_from_clusters,
)
from sieve.solver import iter_rgs


def s_by_pairs(n, edges, labels):
    """Oracle: S_i from a direct pass over node pairs, no cluster tallies."""
    m = len(edges)
    eset = {tuple(sorted(e)) for e in edges}
    inside_edges = 0
    inside_pairs = 0
    for u, v in combinations(range(n), 2):
        if labels[u] == labels[v]:
            inside_pairs += 1
            inside_edges += (u, v) in eset
    return Fraction(inside_edges, m) - Fraction(2 * inside_pairs, n * n - n)


def q_by_pairs(n, edges, labels):
    """Oracle: Newman's (1/2m) sum_uv (A_uv - k_u k_v / 2m) delta(c_u, c_v)."""
    m = len(edges)
    deg = [0] * n
    adj = set()
    for u, v in edges:
        deg[u] += 1
        deg[v] += 1
        adj.add((u, v))
        adj.add((v, u))
    total = Fraction(0)
    for u in range(n):
        for v in range(n):
            if labels[u] == labels[v]:
                total += int((u, v) in adj) - Fraction(deg[u] * deg[v], 2 * m)
    return total / (2 * m)


def test_double_triangle_split(double_triangle):
    p = Partition.from_labels(double_triangle, [0, 0, 0, 1, 1, 1])
    assert eval_S_component(double_triangle, p) == Fraction(16, 35)
    assert eval_S_component_alt(double_triangle, p) == Fraction(16, 35)
    assert s_by_pairs(6, DOUBLE_TRIANGLE, p.assignment) == Fraction(16, 35)
    assert eval_S_component(double_triangle, p, exact=False) == pytest.approx(0.457142857, abs=1e-9)


def test_single_cluster_and_singletons_are_zero(double_triangle):
    assert eval_S_component(double_triangle, Partition.single_cluster(double_triangle)) == 0
    assert eval_S_component(double_triangle, Partition.singletons(double_triangle)) == 0


def test_global_double_triangle_plus_doubleton():
    g = SparseGraph.from_edges(8, DOUBLE_TRIANGLE + [(6, 7)])
    cs = decompose(g)
    ps = [Partition.from_labels(cs[0], [0, 0, 0, 1, 1, 1]), Partition.single_cluster(cs[1])]
    rep = eval_S_global(cs, ps, g.n)
    assert rep.S_exact == Fraction(12, 35)
    assert rep.gated == (False, True)
    assert rep.per_component_exact == (Fraction(16, 35), Fraction(0))
    assert rep.Q is None
    assert eval_S_global(cs, ps, g.n, g=g).Q == pytest.approx(eval_Q(g, global_assignment(cs, ps, g.n)))


def test_single_component_single_cluster_global():
    c = Component.from_edges(6, DOUBLE_TRIANGLE)
    assert eval_S_global([c], [Partition.single_cluster(c)], 6).S == 0


def test_gate_enforced():
    g = SparseGraph.from_edges(3, [(0, 1), (1, 2), (0, 2)])
    cs = decompose(g)
    with pytest.raises(ValueError, match="density"):
        eval_S_global(cs, [Partition.singletons(cs[0])], 3)
    # raising D above 1 lifts the gate
    assert eval_S_global(cs, [Partition.singletons(cs[0])], 3, D=1.01).S == 0


def test_lone_nodes_score_zero():
    g = SparseGraph.from_edges(4, [])
    cs = decompose(g)
    rep = eval_S_global(cs, [Partition.single_cluster(c) for c in cs], 4)
    assert rep.S == 0 and all(rep.gated)
    with pytest.raises(ValueError):
        eval_S_component(cs[0], Partition.single_cluster(cs[0]))


def test_partition_mismatch(double_triangle):
    other = Component.from_edges(6, DOUBLE_TRIANGLE, id=3)
    with pytest.raises(ValueError):
        eval_S_component(double_triangle, Partition.single_cluster(other))
    with pytest.raises(ValueError):
        Partition.from_labels(double_triangle, [0, 0, 1])


def test_labels_helpers():
    assert canonical_labels(["b", "a", "b", "c"]) == (0, 1, 0, 2)
    assert labels_from_clusters([[1, 2], [0]], 3) == (1, 0, 0)
    with pytest.raises(ValueError):
        labels_from_clusters([[0], []], 1)
    with pytest.raises(ValueError):
        labels_from_clusters([[0, 1], [1]], 2)
    with pytest.raises(ValueError):
        labels_from_clusters([[0]], 2)


def test_partition_tallies(double_triangle):
    p = Partition.from_labels(double_triangle, [0, 0, 1, 1, 2, 2])
    assert p.sizes == (2, 2, 2) and p.intra == (1, 1, 1) and p.inter == 4
    assert sum(p.intra) + p.inter == double_triangle.m
    assert p.clusters() == [[0, 1], [2, 3], [4, 5]]


def test_component_partitions_splits_reused_labels():
    g = SparseGraph.from_edges(4, [(0, 1), (2, 3)])
    cs = decompose(g)
    ps = component_partitions(cs, ["x", "x", "x", "x"])
    assert [p.k for p in ps] == [1, 1]


# -- modularity ---------------------------------------------------------------


def test_q_whole_graph_zero(karate):
    assert eval_Q_exact(karate, [0] * karate.n) == 0


def test_q_two_triangles():
    g = SparseGraph.from_edges(6, [(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5)])
    assert eval_Q_exact(g, [0, 0, 0, 1, 1, 1]) == Fraction(1, 2)


def test_q_needs_edges():
    with pytest.raises(ValueError):
        eval_Q(SparseGraph.from_edges(3, []), [0, 1, 2])


def test_q_weighted_doubles_match_multiplicity():
    g = SparseGraph.from_edges(3, [(0, 1), (1, 2)], weights=[2, 1])
    plain = SparseGraph.from_edges(3, [(0, 1), (1, 2)])
    assert eval_Q_exact(g, [0, 0, 1], weighted=True) != eval_Q_exact(plain, [0, 0, 1])
    assert eval_Q_exact(g, [0, 0, 1]) == eval_Q_exact(plain, [0, 0, 1])


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 12), st.integers(0, 2**31))
def test_q_all_singletons_negative(n, seed):
    rng = random.Random(seed)
    edges = random_connected(n, 0.3, rng)
    g = SparseGraph.from_edges(n, edges)
    q = eval_Q_exact(g, list(range(n)))
    deg = g.degrees()
    assert q == -sum(Fraction(d, 2 * g.m) ** 2 for d in deg)
    assert q < 0


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 14), st.integers(0, 2**31))
def test_q_matches_pair_oracle(n, seed):
    rng = random.Random(seed)
    edges = random_connected(n, 0.25, rng)
    labels = [rng.randrange(4) for _ in range(n)]
    g = SparseGraph.from_edges(n, edges)
    assert eval_Q_exact(g, labels) == q_by_pairs(n, edges, labels)


# -- bounds over every partition -----------------------------------------------------------

SWEEP_SEEDS = range(12)


def sweep_components():
    rng = random.Random(2024)
    for seed in SWEEP_SEEDS:
        n = 2 + seed % 7  # 2..8
        yield Component.from_edges(n, random_connected(n, rng.choice([0.1, 0.3, 0.6]), rng))


@pytest.mark.parametrize("c", list(sweep_components()), ids=lambda c: f"n{c.n}m{c.m}")
def test_exhaustive_bounds_and_forms(c):
    for rgs in iter_rgs(c.n):
        p = Partition.from_labels(c, rgs)
        s = eval_S_component(c, p)
        assert -1 < s < 1
        assert s == eval_S_component_alt(c, p)
        assert abs(eval_S_component(c, p, exact=False) - eval_S_component_alt(c, p, exact=False)) <= 1e-12
        assert s == s_by_pairs(c.n, c.local_edges, rgs)
        assert sum(Fraction(mj, c.m) for mj in p.intra) + Fraction(p.inter, c.m) == 1


@settings(max_examples=60, deadline=None)
@given(st.integers(9, 40), st.integers(0, 2**31))
def test_random_partitions_of_larger_components(n, seed):
    rng = random.Random(seed)
    c = Component.from_edges(n, random_connected(n, rng.random() * 0.4, rng))
    labels = [rng.randrange(rng.randint(1, n)) for _ in range(n)]
    p = Partition.from_labels(c, labels)
    s = eval_S_component(c, p)
    assert -1 < s < 1
    assert s == eval_S_component_alt(c, p)
    assert s == s_by_pairs(n, c.local_edges, labels)
    best = max(s, eval_S_component(c, Partition.single_cluster(c)))
    assert best >= 0
