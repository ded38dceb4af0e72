"""The S objective and modularity Q.

S works component by component.  For component i with n_i nodes and m_i edges,
a partition into clusters j scores

    S_i = sum_j (m_ij / m_i - (n_ij^2 - n_ij) / (n_i^2 - n_i)),

the observed intra-cluster edge fraction minus what a random component of the
same density would put inside clusters of those sizes.  The network score is
the node-weighted mean  S = sum_i (n_i / n) S_i.  Components at or above the
density gate D are kept whole (their S_i is 0), as are lone nodes.

All tallies are integers and every score is an exact ``Fraction`` until it is
converted for output.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Sequence

from .components import Component
from .graph import SparseGraph

__all__ = [
    "DEFAULT_DENSITY_GATE",
    "Partition",
    "ObjectiveReport",
    "canonical_labels",
    "labels_from_clusters",
    "eval_S_component",
    "eval_S_component_alt",
    "eval_S_global",
    "eval_Q",
    "eval_Q_exact",
    "component_partitions",
    "global_assignment",
]

DEFAULT_DENSITY_GATE = 0.5


def canonical_labels(labels: Sequence[Hashable]) -> tuple[int, ...]:
    """Relabel clusters 0, 1, 2, ... in order of first appearance.

    The result is the restricted growth string of the partition, so two label
    sequences describe the same partition iff their canonical forms match.
    """
    seen: dict[Hashable, int] = {}
    out = []
    for lab in labels:
        if lab not in seen:
            seen[lab] = len(seen)
        out.append(seen[lab])
    return tuple(out)


def labels_from_clusters(clusters: Sequence[Sequence[int]], n: int) -> tuple[int, ...]:
    """Turn an explicit list of clusters into per-node labels."""
    labels = [-1] * n
    for cid, members in enumerate(clusters):
        if len(members) == 0:
            raise ValueError(f"cluster {cid} is empty")
        for v in members:
            if not 0 <= v < n:
                raise ValueError(f"node {v} outside 0..{n - 1}")
            if labels[v] != -1:
                raise ValueError(f"node {v} assigned to more than one cluster")
            labels[v] = cid
    missing = [v for v, lab in enumerate(labels) if lab == -1]
    if missing:
        raise ValueError(f"nodes without a cluster: {missing[:10]}")
    return tuple(labels)


@dataclass(frozen=True)
class Partition:
    """Assignment of a component's local nodes to clusters, with tallies.

    ``assignment`` is canonical (restricted growth), ``sizes[j]`` is n_ij,
    ``intra[j]`` is m_ij and ``inter`` the number of edges between clusters.
    """

    component_id: int
    assignment: tuple[int, ...]
    sizes: tuple[int, ...]
    intra: tuple[int, ...]
    inter: int

    @classmethod
    def from_labels(cls, c: Component, labels: Sequence[Hashable]) -> "Partition":
        if len(labels) != c.n:
            raise ValueError(
                f"partition covers {len(labels)} nodes but component {c.id} has {c.n}"
            )
        assignment = canonical_labels(labels)
        k = max(assignment, default=-1) + 1
        sizes = [0] * k
        for lab in assignment:
            sizes[lab] += 1
        intra = [0] * k
        inter = 0
        for u, v in c.local_edges:
            if assignment[u] == assignment[v]:
                intra[assignment[u]] += 1
            else:
                inter += 1
        return cls(c.id, assignment, tuple(sizes), tuple(intra), inter)

    @classmethod
    def single_cluster(cls, c: Component) -> "Partition":
        return cls.from_labels(c, [0] * c.n)

    @classmethod
    def singletons(cls, c: Component) -> "Partition":
        return cls.from_labels(c, list(range(c.n)))

    @property
    def k(self) -> int:
        return len(self.sizes)

    @property
    def n(self) -> int:
        return len(self.assignment)

    def clusters(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.k)]
        for v, lab in enumerate(self.assignment):
            out[lab].append(v)
        return out


def _check(c: Component, p: Partition) -> None:
    if p.component_id != c.id or p.n != c.n:
        raise ValueError(f"partition does not belong to component {c.id}")
    if sum(p.intra) + p.inter != c.m:
        raise ValueError(f"partition tallies disagree with component {c.id}")


def eval_S_component(c: Component, p: Partition, exact: bool = True):
    """S_i as the sum over clusters of observed minus expected edge fraction."""
    _check(c, p)
    if c.n < 2:
        raise ValueError("S_i is undefined for a single node; treat it as 0")
    pairs = c.n * c.n - c.n
    if exact:
        return sum(
            (Fraction(mj, c.m) - Fraction(nj * nj - nj, pairs) for nj, mj in zip(p.sizes, p.intra)),
            Fraction(0),
        )
    return sum(mj / c.m - (nj * nj - nj) / pairs for nj, mj in zip(p.sizes, p.intra))


def eval_S_component_alt(c: Component, p: Partition, exact: bool = True):
    """S_i via 1 - sum_j r_ij - b_i, the form the solvers minimize."""
    _check(c, p)
    if c.n < 2:
        raise ValueError("S_i is undefined for a single node; treat it as 0")
    pairs = c.n * c.n - c.n
    if exact:
        r = sum((Fraction(nj * nj - nj, pairs) for nj in p.sizes), Fraction(0))
        return 1 - r - Fraction(p.inter, c.m)
    return 1.0 - sum((nj * nj - nj) / pairs for nj in p.sizes) - p.inter / c.m


@dataclass(frozen=True)
class ObjectiveReport:
    per_component: tuple[float, ...]
    per_component_exact: tuple[Fraction, ...]
    gated: tuple[bool, ...]
    S: float
    S_exact: Fraction
    Q: float | None = None


def eval_S_global(
    cs: Sequence[Component],
    ps: Sequence[Partition],
    n: int,
    D: float = DEFAULT_DENSITY_GATE,
    g: SparseGraph | None = None,
) -> ObjectiveReport:
    """Network score S = sum_i (n_i/n) S_i.

    Components with density >= D must come with a one-cluster partition;
    anything else raises ``ValueError``.  Passing the parent graph ``g`` also
    fills in modularity Q for the combined assignment.
    """
    if len(cs) != len(ps):
        raise ValueError("need exactly one partition per component")
    if n <= 0:
        raise ValueError("n must be positive")
    per: list[Fraction] = []
    gated: list[bool] = []
    total = Fraction(0)
    for c, p in zip(cs, ps):
        _check(c, p)
        is_gated = c.n == 1 or c.density >= D
        if is_gated and p.k != 1:
            raise ValueError(
                f"component {c.id} has density {c.density:.4f} >= D={D} but is split into {p.k} clusters"
            )
        s_i = Fraction(0) if is_gated else eval_S_component(c, p)
        per.append(s_i)
        gated.append(is_gated)
        total += Fraction(c.n, n) * s_i
    q = None
    if g is not None and g.m > 0:
        q = eval_Q(g, global_assignment(cs, ps, g.n))
    return ObjectiveReport(
        per_component=tuple(float(x) for x in per),
        per_component_exact=tuple(per),
        gated=tuple(gated),
        S=float(total),
        S_exact=total,
        Q=q,
    )


def global_assignment(cs: Sequence[Component], ps: Sequence[Partition], n: int) -> tuple[int, ...]:
    """Number clusters consecutively, component by component."""
    labels = [-1] * n
    offset = 0
    for c, p in zip(cs, ps):
        for local, glob in enumerate(c.members):
            labels[glob] = offset + p.assignment[local]
        offset += p.k
    return tuple(labels)


def component_partitions(cs: Sequence[Component], labels: Sequence[Hashable]) -> list[Partition]:
    """Restrict a network-wide assignment to each component.

    A cluster label reused in two components becomes two clusters, one per
    component, since S never spans components.
    """
    return [Partition.from_labels(c, [labels[v] for v in c.members]) for c in cs]


def eval_Q_exact(g: SparseGraph, assignment: Sequence[Hashable], weighted: bool = False) -> Fraction:
    """Modularity sum_c (e_cc - a_c^2) as an exact fraction.

    e_cc is the fraction of edges inside cluster c and a_c the fraction of edge
    endpoints in c (an edge between clusters gives half to each side).  With
    ``weighted=True`` edge multiplicities replace counts.
    """
    if len(assignment) != g.n:
        raise ValueError(f"assignment covers {len(assignment)} nodes, graph has {g.n}")
    wts = g.weights if (weighted and g.weights is not None) else None
    m = g.total_weight if wts is not None else g.m
    if m == 0:
        raise ValueError("modularity needs at least one edge")
    intra: dict[Hashable, int] = defaultdict(int)
    ends: Counter = Counter()
    for idx, (u, v) in enumerate(g.edges):
        w = 1 if wts is None else wts[idx]
        cu, cv = assignment[u], assignment[v]
        if cu == cv:
            intra[cu] += w
        ends[cu] += w
        ends[cv] += w
    two_m = 2 * m
    q = Fraction(sum(intra.values()), m)
    q -= sum((Fraction(d, two_m) ** 2 for d in ends.values()), Fraction(0))
    return q


def eval_Q(g: SparseGraph, assignment: Sequence[Hashable], weighted: bool = False) -> float:
    return float(eval_Q_exact(g, assignment, weighted))
