"""Branch and cut for clique partitioning with integer pair weights.

The LP relaxation has one variable per node pair, 0 <= x_uv <= 1, and the
transitivity (triangle) inequalities x_uv + x_vw - x_uw <= 1, added lazily as
they are found violated.  Every such inequality holds for every partition, so
each LP value is an upper bound and an integral LP point satisfying all of
them is a partition.  Branching fixes one pair variable to 0 or 1; open nodes
are explored best-bound first.  HiGHS solves the LPs and keeps its basis
between solves.
"""

from __future__ import annotations

import heapq
import logging
import math
import time
from dataclasses import dataclass, field

import highspy
import numpy as np

from .problem import PairProblem
from .rgs import canonical, greedy_start, local_search

log = logging.getLogger(__name__)

_VIOLATION_TOL = 1e-6
_INT_TOL = 1e-6


@dataclass
class CutOutcome:
    labels: np.ndarray
    value: int
    bound: int
    proven: bool
    nodes: int
    lps: int
    cuts: int
    trace: list[tuple[float, int, int]] = field(default_factory=list)


class BranchAndCut:
    def __init__(self, problem: PairProblem, deadline: float | None = None, cuts_per_round: int | None = None):
        self.problem = problem
        n = self.n = problem.n
        self.deadline = deadline
        self.iu = np.triu_indices(n, 1)
        N = self.N = len(self.iu[0])
        pid = np.zeros((n, n), dtype=np.int64)
        pid[self.iu] = np.arange(N)
        pid[(self.iu[1], self.iu[0])] = np.arange(N)
        self.pid = pid
        self.cuts_per_round = cuts_per_round or max(200, 20 * n)

        h = self.h = highspy.Highs()
        h.setOptionValue("output_flag", False)
        h.setOptionValue("random_seed", 0)
        cost = problem.W[self.iu].astype(float)
        empty_i = np.array([], dtype=np.int32)
        h.addCols(N, cost, np.zeros(N), np.ones(N), 0, empty_i, empty_i, np.array([], dtype=float))
        h.changeObjectiveSense(highspy.ObjSense.kMaximize)

        self.ncuts = 0
        self.lps = 0
        self.best_val: int | None = None
        self.best: np.ndarray | None = None
        self.trace: list[tuple[float, int, int]] = []
        self._t0 = time.perf_counter()

    # -- LP machinery -------------------------------------------------------

    def _matrix(self, x: np.ndarray) -> np.ndarray:
        X = np.zeros((self.n, self.n))
        X[self.iu] = x
        return X + X.T

    def _separate(self, x: np.ndarray) -> int:
        """Add the most violated triangle inequalities; return how many."""
        n = self.n
        X = self._matrix(x)
        found = []
        for j in range(n):
            # M[i, k] = x_ij + x_jk - x_ik, symmetric in (i, k)
            M = X[:, j][:, None] + X[j, :][None, :] - X
            M[j, :] = 0.0
            M[:, j] = 0.0
            ii, kk = np.nonzero(np.triu(M, 1) > 1.0 + _VIOLATION_TOL)
            if len(ii):
                found.append(np.column_stack([M[ii, kk], self.pid[ii, j], self.pid[j, kk], self.pid[ii, kk]]))
        if not found:
            return 0
        C = np.concatenate(found)
        C = C[np.argsort(-C[:, 0], kind="stable")][: self.cuts_per_round]
        k = len(C)
        idx = C[:, 1:].astype(np.int32).ravel()
        self.h.addRows(
            k,
            np.full(k, -highspy.kHighsInf),
            np.ones(k),
            3 * k,
            np.arange(0, 3 * k, 3, dtype=np.int32),
            idx,
            np.tile([1.0, 1.0, -1.0], k),
        )
        self.ncuts += k
        return k

    def _remaining(self) -> float | None:
        if self.deadline is None:
            return None
        return self.deadline - time.perf_counter()

    def _lp(self) -> tuple[float | None, np.ndarray | None]:
        """Solve and separate until no cut is violated or the node is pruned.

        Returns ``(None, None)`` for an infeasible node and ``(nan, None)`` if
        time ran out mid-solve.
        """
        while True:
            left = self._remaining()
            if left is not None:
                if left <= 0:
                    return math.nan, None
                self.h.setOptionValue("time_limit", max(left, 0.01))
            self.h.run()
            self.lps += 1
            status = self.h.getModelStatus()
            if status == highspy.HighsModelStatus.kInfeasible:
                return None, None
            if status != highspy.HighsModelStatus.kOptimal:
                return math.nan, None
            x = np.asarray(self.h.getSolution().col_value)
            obj = self.h.getInfo().objective_function_value
            if self._dominated(obj):
                return obj, x
            if not self._separate(x):
                return obj, x

    def _dominated(self, lp_bound: float) -> bool:
        # integer objective: a node helps only if it can reach best + 1
        return self.best_val is not None and _floor(lp_bound) <= self.best_val

    # -- incumbents ---------------------------------------------------------

    def offer(self, labels) -> None:
        labels = canonical(labels)
        val = self.problem.pair_sum(labels)
        if self.best_val is None or val > self.best_val:
            self.best_val, self.best = val, labels
            log.debug("incumbent %d after %.2fs", val, time.perf_counter() - self._t0)

    def _round(self, x: np.ndarray) -> np.ndarray:
        """Components of the graph of pairs with x > 1/2."""
        X = self._matrix(x) > 0.5
        lab = -np.ones(self.n, dtype=np.int64)
        c = 0
        for v in range(self.n):
            if lab[v] >= 0:
                continue
            stack = [v]
            lab[v] = c
            while stack:
                u = stack.pop()
                for w in np.nonzero(X[u] & (lab < 0))[0]:
                    lab[w] = c
                    stack.append(w)
            c += 1
        return lab

    # -- search -------------------------------------------------------------

    def run(self, start=None) -> CutOutcome:
        W = self.problem.W
        self.offer(greedy_start(self.problem) if start is None else start)
        N = self.N
        all_cols = np.arange(N, dtype=np.int32)
        heap: list[tuple[float, int, dict[int, int]]] = []
        counter = 0
        nodes = 0
        # every positive pair weight taken at once bounds any partition
        global_ub = int(np.triu(np.maximum(W, 0), 1).sum())
        timed_out = False

        def record():
            ub = max(global_ub, self.best_val)
            if not self.trace or self.trace[-1][1:] != (self.best_val, ub):
                self.trace.append((time.perf_counter() - self._t0, self.best_val, ub))

        heapq.heappush(heap, (-float(global_ub), counter, {}))
        while heap:
            neg, _, fix = heapq.heappop(heap)
            parent_bound = -neg
            # best-first: no open node has a larger bound than the one popped
            global_ub = min(global_ub, _floor(parent_bound))
            record()
            if self._dominated(parent_bound):
                continue
            lo = np.zeros(N)
            hi = np.ones(N)
            for j, val in fix.items():
                lo[j] = hi[j] = val
            self.h.changeColsBounds(N, all_cols, lo, hi)
            obj, x = self._lp()
            nodes += 1
            if obj is not None and math.isnan(obj):
                timed_out = True
                counter += 1
                heapq.heappush(heap, (neg, counter, fix))
                break
            if obj is None or self._dominated(obj):
                continue
            if nodes == 1:
                global_ub = min(global_ub, _floor(obj))
            frac = np.abs(x - 0.5)
            if frac.min() >= 0.5 - _INT_TOL:
                # integral and no violated triangle: a partition
                self.offer(self._round(x))
                continue
            self.offer(local_search(W, self._round(x)))
            j = int(np.argmin(frac))
            for val in (1, 0):
                child = dict(fix)
                child[j] = val
                counter += 1
                heapq.heappush(heap, (-obj, counter, child))
            record()
            left = self._remaining()
            if left is not None and left <= 0 and heap:
                timed_out = True
                break

        if timed_out and heap:
            bound = max(self.best_val, min(global_ub, _floor(-heap[0][0])))
            proven = bound <= self.best_val
        else:
            bound = self.best_val
            proven = True
        global_ub = bound
        record()
        return CutOutcome(
            labels=self.best,
            value=self.best_val,
            bound=int(bound),
            proven=proven,
            nodes=nodes,
            lps=self.lps,
            cuts=self.ncuts,
            trace=self.trace,
        )


def _floor(v: float) -> int:
    # LP values carry solver round-off; err toward the larger integer bound
    return int(math.floor(v + 1e-6 + 1e-8 * abs(v)))
