"""Both objectives as integer pair weights.

Write x_uv = 1 when u and v share a cluster.  Within one component

    S_i        = sum_{u<v} x_uv (A_uv / m_i - 2 / (n_i^2 - n_i))
    Q share    = sum_{u<v} x_uv (A_uv / m - k_u k_v / (2 m^2)) - sum_u k_u^2 / (4 m^2)

so each is a clique partitioning problem.  Scaling by m_i (n_i^2 - n_i) and
2 m^2 respectively makes every weight an integer, which lets the searches
compare objective values exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ..components import Component


@dataclass(frozen=True)
class PairProblem:
    """Maximize sum over co-clustered pairs of ``W[u, v]``.

    The objective of a labelling is ``pair_sum / scale + offset``.
    """

    W: np.ndarray
    scale: int
    offset: Fraction
    kind: str

    @property
    def n(self) -> int:
        return self.W.shape[0]

    def pair_sum(self, labels) -> int:
        lab = np.asarray(labels)
        same = lab[:, None] == lab[None, :]
        return int((self.W * same).sum()) // 2

    def value(self, pair_sum: int) -> Fraction:
        return Fraction(int(pair_sum), self.scale) + self.offset


def _adjacency(c: Component, weighted: bool) -> np.ndarray:
    A = np.zeros((c.n, c.n), dtype=np.int64)
    if c.m:
        e = np.asarray(c.local_edges, dtype=np.int64)
        w = 1
        if weighted and c.local_weights is not None:
            w = np.asarray(c.local_weights, dtype=np.int64)
        A[e[:, 0], e[:, 1]] = w
        A[e[:, 1], e[:, 0]] = w
    return A


def s_problem(c: Component) -> PairProblem:
    if c.n < 2 or c.m < 1:
        raise ValueError("S needs a component with at least one edge")
    pairs = c.n * c.n - c.n
    W = _adjacency(c, weighted=False) * pairs - 2 * c.m
    np.fill_diagonal(W, 0)
    return PairProblem(W=W, scale=c.m * pairs, offset=Fraction(0), kind="s")


def q_problem(c: Component, global_m: int, weighted: bool = False) -> PairProblem:
    """Pair weights for this component's additive share of network modularity.

    ``global_m`` is the network's edge count (total weight when ``weighted``).
    """
    A = _adjacency(c, weighted)
    own = int(A.sum()) // 2
    if global_m < own or global_m <= 0:
        raise ValueError(f"global_m={global_m} is smaller than the component's {own} edges")
    k = A.sum(axis=1)
    W = 2 * global_m * A - np.outer(k, k)
    np.fill_diagonal(W, 0)
    offset = -Fraction(int((k * k).sum()), 4 * global_m * global_m)
    return PairProblem(W=W, scale=2 * global_m * global_m, offset=offset, kind="q")
