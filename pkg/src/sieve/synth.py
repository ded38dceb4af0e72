"""Synthetic sparse networks with planted clusters.

A network is built in three phases, each drawing from the same seeded
generator in this order:

1. ground-truth clusters: k/2 doubletons plus k/2 clusters of 3..10 nodes
   whose edge count meets a density drawn from ``density_range``;
2. bridges: round(beta * k) distinct pairs of non-singleton clusters, each
   joined by ceil(epsilon * smaller size) edges;
3. random edges, uniform over absent pairs, sized so that they make up a
   fraction r of the final edge total.

Every other node is a singleton.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from itertools import product
from pathlib import Path
from typing import Iterator

import numpy as np

from .graph import SparseGraph, write_edge_list

BETAS = (0.05, 0.10)
EPSILONS = (0.2, 0.5)
RATES = (0.0, 0.05, 0.10)

# scenario id -> (beta, epsilon, r); r varies fastest so 3, 6, 9, 12 carry r = 10%
SCENARIOS: dict[int, tuple[float, float, float]] = {
    i + 1: combo for i, combo in enumerate(product(BETAS, EPSILONS, RATES))
}


@dataclass(frozen=True)
class ScenarioSpec:
    """Parameters of one synthetic instance."""

    beta: float = 0.05
    epsilon: float = 0.2
    r: float = 0.0
    seed: int = 0
    n: int = 10_000
    k: int = 200
    size_range: tuple[int, int] = (3, 10)
    density_range: tuple[float, float] = (0.8, 1.0)
    scenario: int = 0  # 0 for ad-hoc specs

    @classmethod
    def for_scenario(cls, scenario: int, seed: int = 0, **overrides) -> "ScenarioSpec":
        if scenario not in SCENARIOS:
            raise ValueError(f"scenario must be in 1..{len(SCENARIOS)}, got {scenario}")
        beta, epsilon, r = SCENARIOS[scenario]
        return cls(beta=beta, epsilon=epsilon, r=r, seed=seed, scenario=scenario, **overrides)

    def rng(self) -> np.random.Generator:
        # independent stream per (scenario, seed)
        return np.random.default_rng(np.random.SeedSequence([self.scenario, self.seed]))


@dataclass(frozen=True)
class PlantedCluster:
    id: int
    members: tuple[int, ...]
    target_density: float
    edges: int

    @property
    def size(self) -> int:
        return len(self.members)

    @property
    def density(self) -> float:
        s = self.size
        return 2 * self.edges / (s * s - s)


@dataclass(frozen=True)
class GroundTruth:
    """True clustering of every node plus generation tallies.

    ``clustering[v]`` is a cluster id; planted clusters use ids 0..k-1 and
    each singleton gets its own id from k upward.
    """

    spec: ScenarioSpec
    clustering: tuple[int, ...]
    clusters: tuple[PlantedCluster, ...]
    bridges: tuple[tuple[int, int], ...]
    bridge_edges: int
    random_edges: int
    structured_edges: int = field(default=0)

    @property
    def doubletons(self) -> int:
        return sum(1 for c in self.clusters if c.size == 2)


def _round_half_up(x: Fraction) -> int:
    return math.floor(x + Fraction(1, 2))


def _pair(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


def _plant(rng: np.random.Generator, nodes: np.ndarray, density: float, edges: set) -> int:
    """Random spanning tree plus random extra pairs up to the target count."""
    s = len(nodes)
    total = s * (s - 1) // 2
    target = max(s - 1, _round_half_up(Fraction(density) * total))
    if target > total:
        raise ValueError(f"density {density} infeasible for a cluster of {s} nodes")
    order = rng.permutation(nodes)
    local = set()
    for i in range(1, s):
        j = int(rng.integers(i))
        local.add(_pair(int(order[i]), int(order[j])))
    rest = [p for p in ((int(a), int(b)) for a, b in _all_pairs(nodes)) if p not in local]
    extra = target - len(local)
    if extra:
        pick = rng.choice(len(rest), size=extra, replace=False)
        local.update(rest[i] for i in sorted(pick.tolist()))
    edges.update(local)
    return len(local)


def _all_pairs(nodes: np.ndarray):
    srt = sorted(int(x) for x in nodes)
    for i, a in enumerate(srt):
        for b in srt[i + 1:]:
            yield a, b


def generate(spec: ScenarioSpec) -> tuple[SparseGraph, GroundTruth]:
    """Build one network and its ground truth; fully determined by ``spec``."""
    rng = spec.rng()
    k = spec.k
    lo, hi = spec.size_range
    if k < 2:
        raise ValueError("need at least two planted clusters")
    if lo < 3 or hi < lo:
        raise ValueError(f"bad size range {spec.size_range}")
    d_lo, d_hi = spec.density_range
    if not (0 < d_lo <= d_hi <= 1):
        raise ValueError(f"bad density range {spec.density_range}")
    if not 0 <= spec.r < 1:
        raise ValueError("r must lie in [0, 1)")

    # (a) clusters
    n_double = k // 2
    sizes = [2] * n_double + rng.integers(lo, hi + 1, size=k - n_double).tolist()
    if sum(sizes) > spec.n:
        raise ValueError(f"{sum(sizes)} clustered nodes do not fit in n={spec.n}")
    perm = rng.permutation(spec.n)
    edges: set[tuple[int, int]] = set()
    clusters = []
    clustering = [-1] * spec.n
    pos = 0
    for cid, s in enumerate(sizes):
        members = perm[pos:pos + s]
        pos += s
        if s == 2:
            dens = 1.0
            edges.add(_pair(int(members[0]), int(members[1])))
            m_c = 1
        else:
            dens = float(rng.uniform(d_lo, d_hi))
            m_c = _plant(rng, members, dens, edges)
        for v in members:
            clustering[int(v)] = cid
        clusters.append(PlantedCluster(cid, tuple(sorted(int(v) for v in members)), dens, m_c))
    next_id = k
    for v in range(spec.n):
        if clustering[v] < 0:
            clustering[v] = next_id
            next_id += 1

    # (b) bridges between distinct cluster pairs, no pair twice
    n_bridges = _round_half_up(Fraction(str(spec.beta)) * k)
    if n_bridges > k * (k - 1) // 2:
        raise ValueError(f"{n_bridges} bridges exceed the {k * (k - 1) // 2} cluster pairs")
    chosen: set[tuple[int, int]] = set()
    bridges = []
    while len(bridges) < n_bridges:
        a, b = (int(x) for x in rng.choice(k, size=2, replace=False))
        key = _pair(a, b)
        if key in chosen:
            continue
        chosen.add(key)
        bridges.append(key)
    bridge_edges = 0
    eps = Fraction(str(spec.epsilon))
    for a, b in bridges:
        A, B = clusters[a].members, clusters[b].members
        count = max(1, math.ceil(eps * min(len(A), len(B))))
        cells = rng.choice(len(A) * len(B), size=count, replace=False)
        for cell in sorted(cells.tolist()):
            edges.add(_pair(A[cell // len(B)], B[cell % len(B)]))
        bridge_edges += count

    # (c) random edges: r of the final total
    structured = len(edges)
    r = Fraction(str(spec.r))
    n_random = _round_half_up(r / (1 - r) * structured)
    free = spec.n * (spec.n - 1) // 2 - structured
    if n_random > free:
        raise ValueError("not enough absent pairs for the random edges")
    added = 0
    while added < n_random:
        u, v = (int(x) for x in rng.integers(spec.n, size=2))
        if u == v:
            continue
        p = _pair(u, v)
        if p in edges:
            continue
        edges.add(p)
        added += 1

    g = SparseGraph.from_edges(spec.n, sorted(edges))
    truth = GroundTruth(
        spec=spec,
        clustering=tuple(clustering),
        clusters=tuple(clusters),
        bridges=tuple(bridges),
        bridge_edges=bridge_edges,
        random_edges=n_random,
        structured_edges=structured,
    )
    return g, truth


def scenario_suite(
    seeds: int,
    scenarios=None,
    **overrides,
) -> Iterator[tuple[int, SparseGraph, GroundTruth]]:
    """Yield ``(scenario_id, graph, truth)`` for every scenario and seed 0..seeds-1.

    ``overrides`` (``n``, ``k`` ...) apply to every spec.
    """
    if seeds < 1:
        raise ValueError("seeds must be at least 1")
    for sid in scenarios or sorted(SCENARIOS):
        for seed in range(seeds):
            g, truth = generate(ScenarioSpec.for_scenario(sid, seed, **overrides))
            yield sid, g, truth


def write_truth(truth: GroundTruth, out) -> None:
    out.write("node\tcluster_id\n")
    for v, c in enumerate(truth.clustering):
        out.write(f"{v}\t{c}\n")


def manifest(truth: GroundTruth, g: SparseGraph) -> dict:
    return {
        "spec": asdict(truth.spec),
        "n": g.n,
        "m": g.m,
        "clusters": len(truth.clusters),
        "doubletons": truth.doubletons,
        "bridges": len(truth.bridges),
        "bridge_edges": truth.bridge_edges,
        "structured_edges": truth.structured_edges,
        "random_edges": truth.random_edges,
    }


def write_instance(g: SparseGraph, truth: GroundTruth, directory, stem: str | None = None) -> dict[str, Path]:
    """Write ``<stem>.edges``, ``<stem>.truth.tsv`` and ``<stem>.json``."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    spec = truth.spec
    stem = stem or f"scenario{spec.scenario:02d}_seed{spec.seed:03d}"
    paths = {
        "edges": directory / f"{stem}.edges",
        "truth": directory / f"{stem}.truth.tsv",
        "manifest": directory / f"{stem}.json",
    }
    with open(paths["edges"], "w") as f:
        write_edge_list(g, f)
    with open(paths["truth"], "w") as f:
        write_truth(truth, f)
    with open(paths["manifest"], "w") as f:
        json.dump(manifest(truth, g), f, indent=2, sort_keys=True)
        f.write("\n")
    return paths
