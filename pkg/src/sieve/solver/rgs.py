"""Set partitions as restricted growth strings.

A restricted growth string (RGS) labels node 0 with cluster 0 and every later
node with an existing label or the next unused one.  Each set partition has
exactly one RGS, so walking them in lexicographic order visits every partition
once and the first optimum met is the lexicographically smallest one.
"""

from __future__ import annotations

import time
from typing import Iterator

import numpy as np

from .problem import PairProblem


def iter_rgs(n: int) -> Iterator[tuple[int, ...]]:
    """All restricted growth strings of length ``n`` in lexicographic order."""
    if n == 0:
        yield ()
        return
    a = [0] * n
    top = [0] * n  # top[i] = max(a[0..i])
    while True:
        yield tuple(a)
        i = n - 1
        while i > 0 and a[i] == top[i - 1] + 1:
            i -= 1
        if i == 0:
            return
        a[i] += 1
        top[i] = max(top[i - 1], a[i])
        for j in range(i + 1, n):
            a[j] = 0
            top[j] = top[i]


def bell(n: int) -> int:
    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
    return row[0]


def local_search(W: np.ndarray, labels) -> np.ndarray:
    """Move single nodes to their best cluster until no move improves.

    Returns canonical labels.  Every accepted move strictly increases the
    integer pair sum, so the loop terminates.
    """
    lab = np.asarray(labels, dtype=np.int64).copy()
    n = len(lab)
    if n == 0:
        return lab
    _, lab = np.unique(lab, return_inverse=True)
    improved = True
    while improved:
        improved = False
        for v in range(n):
            k = int(lab.max()) + 2
            member = np.zeros((n, k), dtype=np.int64)
            member[np.arange(n), lab] = 1
            member[v, lab[v]] = 0
            gain = W[v] @ member
            best = int(np.argmax(gain))
            if gain[best] > gain[lab[v]]:
                lab[v] = best
                improved = True
        _, lab = np.unique(lab, return_inverse=True)
    return canonical(lab)


def canonical(labels) -> np.ndarray:
    seen: dict[int, int] = {}
    out = np.empty(len(labels), dtype=np.int64)
    for i, x in enumerate(np.asarray(labels).tolist()):
        if x not in seen:
            seen[x] = len(seen)
        out[i] = seen[x]
    return out


def greedy_start(problem: PairProblem) -> np.ndarray:
    """A quick incumbent: the better of local search from singletons or from
    one cluster."""
    W = problem.W
    n = problem.n
    cands = [local_search(W, np.arange(n)), local_search(W, np.zeros(n, dtype=np.int64))]
    return max(cands, key=problem.pair_sum)


class RgsSearch:
    """Depth-first branch and bound over restricted growth strings.

    Nodes are labelled in index order; node t may join any open cluster or open
    a new one, so a new cluster always starts at its lowest-indexed node and
    permuted duplicates never arise.  The bound adds, for every unlabelled
    node, its best non-negative gain against the clusters so far, plus every
    positive weight between two unlabelled nodes; both terms can only
    overestimate what the remaining nodes contribute.

    Ties are resolved toward the lexicographically smallest labelling, which
    needs pruning to be strict (``bound < best``).
    """

    def __init__(self, problem: PairProblem, deadline: float | None = None):
        self.problem = problem
        self.W = problem.W.tolist()
        n = problem.n
        pos = np.maximum(problem.W, 0)
        # suffix[t] = sum of positive weights among nodes t..n-1
        suffix = [0] * (n + 1)
        for t in range(n - 1, -1, -1):
            suffix[t] = suffix[t + 1] + int(pos[t, t + 1:].sum())
        self.suffix = suffix
        self.deadline = deadline
        self.nodes = 0
        self.best_val: int | None = None
        self.best: tuple[int, ...] | None = None
        self.timed_out = False
        self.trace: list[tuple[float, int]] = []
        self._t0 = time.perf_counter()

    def offer(self, labels, val: int) -> None:
        labels = tuple(int(x) for x in labels)
        if self.best_val is None or val > self.best_val or (val == self.best_val and labels < self.best):
            improved = self.best_val is None or val > self.best_val
            self.best_val, self.best = val, labels
            if improved:
                self.trace.append((time.perf_counter() - self._t0, val))

    def run(self) -> None:
        n = self.problem.n
        if n == 0:
            self.offer((), 0)
            return
        # gain[u][c]: weight from unlabelled u to the members of cluster c
        gain = [[0] * (n + 1) for _ in range(n)]
        labels = [0] * n
        self._dfs(0, 0, 0, labels, gain)

    def _dfs(self, t: int, k: int, cur: int, labels: list[int], gain: list[list[int]]) -> None:
        self.nodes += 1
        if self.deadline is not None and self.nodes % 2048 == 0 and time.perf_counter() > self.deadline:
            self.timed_out = True
        if self.timed_out:
            return
        n = self.problem.n
        if t == n:
            self.offer(labels, cur)
            return
        bound = cur + self.suffix[t]
        for u in range(t, n):
            g = max(gain[u][:k], default=0)
            if g > 0:
                bound += g
        if self.best_val is not None and bound < self.best_val:
            return
        W = self.W
        for c in range(k + 1):
            labels[t] = c
            for u in range(t + 1, n):
                gain[u][c] += W[u][t]
            self._dfs(t + 1, k + 1 if c == k else k, cur + (gain[t][c] if c < k else 0), labels, gain)
            for u in range(t + 1, n):
                gain[u][c] -= W[u][t]
            if self.timed_out:
                return

    def upper_bound(self) -> int:
        """Valid bound after the search: exact when it finished."""
        if not self.timed_out:
            return self.best_val
        # root bound: every positive pair weight
        return max(self.suffix[0], self.best_val if self.best_val is not None else 0)


def brute_force_values(n: int, edges, value_of) -> tuple[tuple[int, ...], object]:
    """Evaluate ``value_of(sizes, intra, inter, rgs)`` over every partition.

    Returns the lexicographically smallest RGS attaining the maximum.  Tallies
    are recomputed from scratch for each partition.
    """
    best_val = None
    best = None
    for rgs in iter_rgs(n):
        k = max(rgs, default=-1) + 1
        sizes = [0] * k
        for lab in rgs:
            sizes[lab] += 1
        intra = [0] * k
        inter = 0
        for u, v in edges:
            if rgs[u] == rgs[v]:
                intra[rgs[u]] += 1
            else:
                inter += 1
        val = value_of(sizes, intra, inter, rgs)
        if best_val is None or val > best_val:
            best_val, best = val, rgs
    return best, best_val
