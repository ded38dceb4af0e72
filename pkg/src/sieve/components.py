"""Breadth-first separation of a graph into its connected components."""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, field
from fractions import Fraction

from .graph import SparseGraph

__all__ = ["Component", "decompose", "component_size_distribution"]


@dataclass(frozen=True)
class Component:
    """Connected subgraph with its own 0..n_i-1 node numbering.

    ``members[local]`` is the global node id.  ``local_edges`` are canonical
    ``(u, v)`` pairs, ``u < v``, in local numbering; ``local_weights`` mirrors the
    parent graph's weights when it has any.
    """

    id: int
    members: tuple[int, ...]
    local_edges: tuple[tuple[int, int], ...]
    local_weights: tuple[int, ...] | None = field(default=None, repr=False)

    @property
    def n(self) -> int:
        return len(self.members)

    @property
    def m(self) -> int:
        return len(self.local_edges)

    @property
    def density_exact(self) -> Fraction:
        if self.n == 1:
            return Fraction(1)
        return Fraction(2 * self.m, self.n * self.n - self.n)

    @property
    def density(self) -> float:
        """2 m_i / (n_i^2 - n_i), with a lone node counted as fully dense."""
        return float(self.density_exact)

    def adjacency(self) -> list[list[int]]:
        nbrs: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.local_edges:
            nbrs[u].append(v)
            nbrs[v].append(u)
        return nbrs

    @classmethod
    def from_edges(cls, n: int, edges, weights=None, id: int = 0) -> "Component":
        """Wrap a standalone connected graph on nodes 0..n-1 (handy in tests)."""
        canon = sorted({(min(u, v), max(u, v)) for u, v in edges})
        wts = None
        if weights is not None:
            lookup = {(min(u, v), max(u, v)): w for (u, v), w in zip(edges, weights)}
            wts = tuple(lookup[e] for e in canon)
        return cls(id=id, members=tuple(range(n)), local_edges=tuple(canon), local_weights=wts)


def decompose(g: SparseGraph) -> list[Component]:
    """Split ``g`` into connected components in O(n + m).

    Searches start from the lowest unvisited node id, so components come out in
    order of their smallest member.  Only a visited flag per node and the
    frontier queue are kept; no search tree is built.
    """
    visited = bytearray(g.n)
    local = [0] * g.n
    comp_of = [0] * g.n
    found: list[list[int]] = []
    for start in range(g.n):
        if visited[start]:
            continue
        visited[start] = 1
        queue = deque([start])
        members: list[int] = []
        while queue:
            w = queue.popleft()
            members.append(w)
            for x in g.adjacency[w]:
                if not visited[x]:
                    visited[x] = 1
                    queue.append(x)
        members.sort()
        cid = len(found)
        for i, v in enumerate(members):
            local[v] = i
            comp_of[v] = cid
        found.append(members)

    edge_lists: list[list[tuple[int, int]]] = [[] for _ in found]
    weight_lists: list[list[int]] = [[] for _ in found]
    for idx, (u, v) in enumerate(g.edges):
        cid = comp_of[u]
        lu, lv = local[u], local[v]
        edge_lists[cid].append((lu, lv) if lu < lv else (lv, lu))
        if g.weights is not None:
            weight_lists[cid].append(g.weights[idx])

    out = []
    for cid, members in enumerate(found):
        order = sorted(range(len(edge_lists[cid])), key=edge_lists[cid].__getitem__)
        edges = tuple(edge_lists[cid][i] for i in order)
        wts = tuple(weight_lists[cid][i] for i in order) if g.weights is not None else None
        out.append(Component(id=cid, members=tuple(members), local_edges=edges, local_weights=wts))
    return out


def component_size_distribution(cs: list[Component]) -> dict[int, int]:
    """Tally of component node counts, keyed by size."""
    return dict(sorted(Counter(c.n for c in cs).items()))
