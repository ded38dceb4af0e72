import json
import math
from collections import Counter

import pytest

from sieve.components import decompose
from sieve.evaluate import jaccard
from sieve.objectives import global_assignment
from sieve.solver import solve_S
from sieve.synth import SCENARIOS, ScenarioSpec, generate, scenario_suite, write_instance


def test_scenario_table():
    assert len(SCENARIOS) == 12
    assert len(set(SCENARIOS.values())) == 12
    assert {SCENARIOS[i][2] for i in (3, 6, 9, 12)} == {0.10}
    assert {v[0] for v in SCENARIOS.values()} == {0.05, 0.10}
    assert {v[1] for v in SCENARIOS.values()} == {0.2, 0.5}


@pytest.mark.parametrize("sid", sorted(SCENARIOS))
def test_full_size_invariants(sid):
    g, truth = generate(ScenarioSpec.for_scenario(sid, seed=3))
    spec = truth.spec
    assert g.n == 10_000
    assert truth.doubletons == 100
    assert len(truth.clusters) == 200
    assert len(truth.bridges) == round(spec.beta * 200)
    assert len(set(truth.bridges)) == len(truth.bridges)
    edges = set(g.edges)
    for cl in truth.clusters:
        inside = [(u, v) for i, u in enumerate(cl.members) for v in cl.members[i + 1:] if (u, v) in edges]
        # bridges and random edges never land inside a cluster at these rates,
        # so the structural count is exact up to random-edge hits
        assert len(inside) >= cl.edges
        s = cl.size
        if s == 2:
            assert cl.edges == 1
        else:
            assert 3 <= s <= 10
            assert 0.8 <= cl.target_density <= 1.0
            assert abs(cl.edges - cl.target_density * s * (s - 1) / 2) <= 0.5 + 1e-9 or cl.edges == s - 1
    # r of the final total, within one edge of rounding
    assert abs(truth.random_edges - spec.r * g.m) <= 1
    assert g.m == truth.structured_edges + truth.random_edges
    sizes = Counter(truth.clustering)
    assert sum(1 for c, k in sizes.items() if k == 1) == 10_000 - sum(cl.size for cl in truth.clusters)


def test_clusters_connected():
    g, truth = generate(ScenarioSpec(seed=9, n=2000, k=60))
    edges = set(g.edges)
    for cl in truth.clusters:
        seen = {cl.members[0]}
        stack = [cl.members[0]]
        while stack:
            u = stack.pop()
            for v in cl.members:
                if v not in seen and (min(u, v), max(u, v)) in edges:
                    seen.add(v)
                    stack.append(v)
        assert len(seen) == cl.size


def test_bridge_count_and_width():
    g, truth = generate(ScenarioSpec(beta=0.05, epsilon=0.5, seed=1))
    assert len(truth.bridges) == 10
    want = sum(
        max(1, math.ceil(0.5 * min(truth.clusters[a].size, truth.clusters[b].size)))
        for a, b in truth.bridges
    )
    assert truth.bridge_edges == want


def test_noise_free_recovered_exactly():
    g, truth = generate(ScenarioSpec(beta=0, epsilon=0.2, r=0, n=1500, k=40, seed=4))
    cs = decompose(g)
    ps = [solve_S(c).partition for c in cs]
    labels = global_assignment(cs, ps, g.n)
    assert jaccard(truth.clustering, labels).ji == 1


def test_determinism_and_independence():
    a = generate(ScenarioSpec.for_scenario(5, seed=2, n=1000, k=20))[0]
    b = generate(ScenarioSpec.for_scenario(5, seed=2, n=1000, k=20))[0]
    c = generate(ScenarioSpec.for_scenario(5, seed=3, n=1000, k=20))[0]
    assert a.edges == b.edges and a.edges != c.edges


def test_suite_sizes():
    assert sum(1 for _ in scenario_suite(1, n=500, k=10)) == 12
    ids = [sid for sid, _, _ in scenario_suite(2, n=500, k=10)]
    assert ids == [i for i in range(1, 13) for _ in range(2)]
    with pytest.raises(ValueError):
        list(scenario_suite(0))


def test_infeasible_specs():
    with pytest.raises(ValueError):
        generate(ScenarioSpec(n=50, k=40))
    with pytest.raises(ValueError):
        generate(ScenarioSpec(n=100, k=4, beta=2.0))
    with pytest.raises(ValueError):
        generate(ScenarioSpec(size_range=(2, 5)))
    with pytest.raises(ValueError):
        ScenarioSpec.for_scenario(13)


def test_written_files_byte_identical(tmp_path):
    spec = ScenarioSpec.for_scenario(9, seed=0, n=800, k=16)
    p1 = write_instance(*generate(spec), tmp_path / "a")
    p2 = write_instance(*generate(spec), tmp_path / "b")
    for kind in p1:
        assert p1[kind].read_bytes() == p2[kind].read_bytes()
    man = json.loads(p1["manifest"].read_text())
    assert man["spec"]["scenario"] == 9 and man["n"] == 800
    lines = p1["edges"].read_text().splitlines()
    assert lines[0] == "# sieve n=800 base=0"
    r_edges = man["random_edges"]
    assert abs(r_edges / man["m"] - 0.10) <= 1 / man["m"]
