"""Sparse undirected graph model and ingestion.

Nodes are dense integers ``0..n-1``.  External identifiers (1-based ids from
benchmark files, gene names from correlation tables) are kept in
``SparseGraph.labels`` and written back out next to every result.
"""

from __future__ import annotations

import heapq
import math
import re
from collections import Counter
from dataclasses import dataclass, field
from typing import IO, Iterable, Iterator, Sequence

__all__ = [
    "GraphFormatError",
    "SparseGraph",
    "DegreeReport",
    "load_edge_list",
    "read_edge_list",
    "write_edge_list",
    "write_label_map",
    "build_threshold_network",
    "read_correlation_rows",
    "degree_report",
]

_HEADER = re.compile(r"^#\s*sieve\s+n=(\d+)\s+base=([01])\s*$")


class GraphFormatError(ValueError):
    """Raised for malformed graph input.  ``lineno`` is 1-based when known."""

    def __init__(self, message: str, lineno: int | None = None):
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
        self.lineno = lineno


@dataclass(frozen=True)
class SparseGraph:
    """Immutable undirected simple graph.

    ``edges`` holds canonical pairs ``(u, v)`` with ``u < v`` in sorted order and
    ``adjacency[v]`` the sorted neighbours of ``v``.  ``weights`` is either None
    or a tuple of positive integer multiplicities aligned with ``edges``; only
    the modularity code ever looks at it.
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    adjacency: tuple[tuple[int, ...], ...] = field(repr=False)
    labels: tuple[str, ...] | None = None
    weights: tuple[int, ...] | None = None

    @classmethod
    def from_edges(
        cls,
        n: int,
        edges: Iterable[tuple[int, int]],
        labels: Sequence[str] | None = None,
        weights: Sequence[int] | None = None,
    ) -> "SparseGraph":
        """Build a graph, canonicalizing orientation and collapsing duplicates.

        When ``weights`` is given, duplicate pairs must agree on their weight.
        """
        if n < 0:
            raise ValueError("node count must be non-negative")
        edges = list(edges)
        if weights is not None and len(weights) != len(edges):
            raise ValueError("weights must align with edges")
        seen: dict[tuple[int, int], int] = {}
        for i, (u, v) in enumerate(edges):
            u, v = int(u), int(v)
            if u == v:
                raise GraphFormatError(f"self-loop on node {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) outside 0..{n - 1}")
            key = (u, v) if u < v else (v, u)
            w = 1 if weights is None else int(weights[i])
            if w <= 0:
                raise ValueError(f"edge {key} has non-positive weight {w}")
            if key in seen and seen[key] != w:
                raise ValueError(f"conflicting weights for edge {key}")
            seen[key] = w
        canon = tuple(sorted(seen))
        nbrs: list[list[int]] = [[] for _ in range(n)]
        for u, v in canon:
            nbrs[u].append(v)
            nbrs[v].append(u)
        adjacency = tuple(tuple(sorted(a)) for a in nbrs)
        if labels is not None:
            labels = tuple(str(x) for x in labels)
            if len(labels) != n:
                raise ValueError("labels must have one entry per node")
        wts = None if weights is None else tuple(seen[e] for e in canon)
        return cls(n=n, edges=canon, adjacency=adjacency, labels=labels, weights=wts)

    @property
    def m(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def degrees(self) -> list[int]:
        return [len(a) for a in self.adjacency]

    @property
    def density(self) -> float:
        """2m / (n^2 - n); zero for graphs with fewer than two nodes."""
        if self.n < 2:
            return 0.0
        return 2.0 * self.m / (self.n * self.n - self.n)

    @property
    def total_weight(self) -> int:
        return self.m if self.weights is None else sum(self.weights)

    def weighted_degrees(self) -> list[int]:
        if self.weights is None:
            return self.degrees()
        deg = [0] * self.n
        for (u, v), w in zip(self.edges, self.weights):
            deg[u] += w
            deg[v] += w
        return deg

    def label(self, v: int) -> str:
        return self.labels[v] if self.labels is not None else str(v)

    def unweighted(self) -> "SparseGraph":
        if self.weights is None:
            return self
        return SparseGraph(self.n, self.edges, self.adjacency, self.labels, None)


@dataclass(frozen=True)
class DegreeReport:
    histogram: dict[int, int]
    zero_degree_fraction: float
    n: int
    m: int

    @property
    def edges_per_node(self) -> float:
        """m / n, the "average degree" convention of the benchmark tables."""
        return self.m / self.n if self.n else 0.0

    @property
    def mean_degree(self) -> float:
        """2m / n, the usual mean degree."""
        return 2.0 * self.m / self.n if self.n else 0.0


def _tokens(source: IO[str] | Iterable[str]) -> Iterator[tuple[int, list[str]]]:
    for lineno, raw in enumerate(source, start=1):
        line = raw.strip()
        if not line:
            continue
        yield lineno, line.split()


def load_edge_list(
    source: IO[str] | Iterable[str],
    node_count_hint: int | None = None,
) -> SparseGraph:
    """Parse a whitespace-separated edge list.

    Each data line holds two node tokens and, optionally, a positive integer
    weight.  Lines starting with ``#`` are comments; a ``# sieve n=<n>
    base=<0|1>`` header (as written by :func:`write_edge_list`) fixes the node
    count and id base.

    Integer tokens are positional ids.  Ids are 0-based if a 0 occurs (or the
    header says so), otherwise 1-based, and every id up to the largest one is a
    node, so gaps become isolated nodes.  Any non-integer token switches the
    file to label mode, where labels are numbered in order of first appearance.
    ``node_count_hint`` appends isolated nodes; it may not be smaller than the
    number of nodes the file references.
    """
    pairs: list[tuple[str, str]] = []
    wts: list[int | None] = []
    header_n: int | None = None
    header_base: int | None = None
    for lineno, toks in _tokens(source):
        if toks[0].startswith("#"):
            hdr = _HEADER.match(" ".join(toks))
            if hdr:
                header_n, header_base = int(hdr.group(1)), int(hdr.group(2))
            continue
        if len(toks) not in (2, 3):
            raise GraphFormatError(f"expected 2 or 3 fields, got {len(toks)}", lineno)
        a, b = toks[0], toks[1]
        if a == b:
            raise GraphFormatError(f"self-loop on node {a}", lineno)
        if len(toks) == 3:
            try:
                w = int(toks[2])
            except ValueError:
                raise GraphFormatError(f"weight {toks[2]!r} is not an integer", lineno) from None
            if w <= 0:
                raise GraphFormatError(f"weight must be positive, got {w}", lineno)
        else:
            w = None
        if pairs and (w is None) != (wts[0] is None):
            raise GraphFormatError("weight column present on some lines only", lineno)
        wts.append(w)
        pairs.append((a, b))

    def as_int(tok: str) -> int | None:
        try:
            val = int(tok)
        except ValueError:
            return None
        return val if val >= 0 else None

    ids = [(as_int(a), as_int(b)) for a, b in pairs]
    integer_mode = all(x is not None and y is not None for x, y in ids)

    if integer_mode:
        base = header_base
        if base is None:
            base = 0 if any(0 in p for p in ids) else 1
        top = max((max(p) for p in ids), default=base - 1)
        if any(min(p) < base for p in ids):
            raise GraphFormatError("node id 0 in a 1-based file")
        referenced = top - base + 1
        n = referenced if header_n is None else header_n
        if header_n is not None and header_n < referenced:
            raise GraphFormatError(f"header declares n={header_n} but id {top} is referenced")
        if node_count_hint is not None:
            if node_count_hint < referenced:
                raise GraphFormatError(
                    f"node_count_hint={node_count_hint} is smaller than the highest referenced node ({top})"
                )
            n = max(n, node_count_hint)
        edges = [(x - base, y - base) for x, y in ids]
        labels = [str(i + base) for i in range(n)]
    else:
        index: dict[str, int] = {}
        for a, b in pairs:
            for tok in (a, b):
                if tok not in index:
                    index[tok] = len(index)
        n = len(index)
        if node_count_hint is not None:
            if node_count_hint < n:
                raise GraphFormatError(
                    f"node_count_hint={node_count_hint} is smaller than the {n} labelled nodes"
                )
            n = node_count_hint
        labels = list(index) + [f"_isolated{i}" for i in range(len(index), n)]
        edges = [(index[a], index[b]) for a, b in pairs]
    weighted = bool(wts) and wts[0] is not None
    return SparseGraph.from_edges(n, edges, labels=labels, weights=wts if weighted else None)


def read_edge_list(path, node_count_hint: int | None = None) -> SparseGraph:
    with open(path, encoding="utf-8") as fh:
        return load_edge_list(fh, node_count_hint)


def write_edge_list(g: SparseGraph, out: IO[str]) -> None:
    """Write the canonical form: a header line, then sorted 0-based ``u v`` lines."""
    out.write(f"# sieve n={g.n} base=0\n")
    if g.weights is None:
        for u, v in g.edges:
            out.write(f"{u} {v}\n")
    else:
        for (u, v), w in zip(g.edges, g.weights):
            out.write(f"{u} {v} {w}\n")


def write_label_map(g: SparseGraph, out: IO[str]) -> None:
    out.write("node\tlabel\n")
    for v in range(g.n):
        out.write(f"{v}\t{g.label(v)}\n")


def read_correlation_rows(source: IO[str] | Iterable[str]) -> Iterator[tuple[str, str, float]]:
    """Yield ``(i, j, score)`` from three-column text; ``#`` lines are skipped."""
    for lineno, toks in _tokens(source):
        if toks[0].startswith("#"):
            continue
        if len(toks) != 3:
            raise GraphFormatError(f"expected 3 fields, got {len(toks)}", lineno)
        try:
            score = float(toks[2])
        except ValueError:
            raise GraphFormatError(f"score {toks[2]!r} is not a number", lineno) from None
        yield toks[0], toks[1], score


def build_threshold_network(
    correlation_rows: Iterable[tuple[object, object, float]],
    top_k: int,
) -> SparseGraph:
    """Keep the ``top_k`` highest-scoring pairs as edges.

    Every identifier that appears in any row becomes a node, so pairs below the
    cutoff still contribute (usually degree-zero) nodes.  Nodes are numbered in
    order of first appearance.  Ties at the cutoff go to the pair that comes
    first in canonical ``(min index, max index)`` order.  Only ``top_k`` rows
    are held at once besides the node index, so input pairs are assumed
    distinct; a duplicate is only detected if it survives the cutoff.
    """
    if top_k < 1:
        raise ValueError("top_k must be at least 1")
    index: dict[object, int] = {}
    rows = 0
    # min-heap keyed so that the root is the weakest kept pair:
    # lowest score first, and among equal scores the later canonical pair.
    heap: list[tuple[float, tuple[int, int], tuple[int, int]]] = []
    for i, j, score in correlation_rows:
        score = float(score)
        if math.isnan(score):
            raise ValueError(f"NaN score for pair ({i}, {j})")
        for tok in (i, j):
            if tok not in index:
                index[tok] = len(index)
        a, b = index[i], index[j]
        if a == b:
            raise ValueError(f"self-pair for node {i}")
        key = (a, b) if a < b else (b, a)
        rows += 1
        item = (score, (-key[0], -key[1]), key)
        if len(heap) < top_k:
            heapq.heappush(heap, item)
        elif item > heap[0]:
            heapq.heapreplace(heap, item)
    if rows < top_k:
        raise ValueError(f"only {rows} pairs supplied, need top_k={top_k}")
    kept = [it[2] for it in heap]
    if len(set(kept)) != len(kept):
        raise ValueError("duplicate pair among the kept rows")
    labels = [str(tok) for tok in index]
    return SparseGraph.from_edges(len(index), kept, labels=labels)


def degree_report(g: SparseGraph) -> DegreeReport:
    hist = Counter(g.degrees())
    zero = hist.get(0, 0) / g.n if g.n else 0.0
    return DegreeReport(histogram=dict(sorted(hist.items())), zero_degree_fraction=zero, n=g.n, m=g.m)
