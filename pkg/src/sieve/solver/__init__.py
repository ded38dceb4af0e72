"""Exact per-component maximization of S and of the modularity share.

Two exact engines sit behind :func:`solve_S` and :func:`solve_Q`:

* ``"rgs"``: depth-first branch and bound over restricted growth strings.
  Returns the lexicographically smallest optimal labelling.  Used for small
  components and as the fallback for components too large for the LP.
* ``"cut"``: LP-based branch and cut on the pair formulation (see
  :mod:`sieve.solver.cutting`).  Proves optimality on the classic benchmark
  networks in seconds.

Both are anytime: with a time budget they return the best partition found and
a valid upper bound.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Literal

from ..components import Component
from ..objectives import DEFAULT_DENSITY_GATE, Partition
from .mip import MipModel, build_mip
from .problem import PairProblem, q_problem, s_problem
from .rgs import RgsSearch, bell, brute_force_values, greedy_start, iter_rgs

__all__ = [
    "SolveResult",
    "solve_S",
    "solve_Q",
    "brute_force_best",
    "export_mip",
    "MipModel",
    "iter_rgs",
    "bell",
    "RGS_MAX_N",
    "CUT_MAX_N",
]

RGS_MAX_N = 10
CUT_MAX_N = 400

Method = Literal["auto", "rgs", "cut"]


@dataclass(frozen=True)
class SolveResult:
    """Outcome of one component solve.

    ``objective`` is S_i for S solves and the component's additive share of
    network Q for Q solves.  ``trace`` lists ``(seconds, objective,
    upper_bound)`` snapshots in the order they were reached.
    """

    partition: Partition
    objective: float
    upper_bound: float
    proven_optimal: bool
    nodes_explored: int
    wall_time: float
    objective_exact: Fraction = field(repr=False, default=Fraction(0))
    upper_bound_exact: Fraction = field(repr=False, default=Fraction(0))
    method: str = "trivial"
    gated: bool = False
    trace: tuple[tuple[float, float, float], ...] = field(repr=False, default=())


def _trivial(c: Component, t0: float, gated: bool, value: Fraction = Fraction(0)) -> SolveResult:
    return SolveResult(
        partition=Partition.single_cluster(c),
        objective=float(value),
        upper_bound=float(value),
        proven_optimal=True,
        nodes_explored=0,
        wall_time=time.perf_counter() - t0,
        objective_exact=value,
        upper_bound_exact=value,
        method="trivial",
        gated=gated,
    )


def _pick(method: Method, n: int) -> str:
    if method == "auto":
        if n <= RGS_MAX_N or n > CUT_MAX_N:
            return "rgs"
        return "cut"
    if method not in ("rgs", "cut"):
        raise ValueError(f"unknown method {method!r}")
    return method


def _run(c: Component, problem: PairProblem, budget: float | None, method: Method, t0: float) -> SolveResult:
    deadline = None if budget is None else t0 + budget
    engine = _pick(method, c.n)
    if engine == "rgs":
        search = RgsSearch(problem, deadline)
        start = greedy_start(problem)
        search.offer(start, problem.pair_sum(start))
        search.trace.clear()
        search.run()
        labels, value, bound = search.best, search.best_val, search.upper_bound()
        proven = not search.timed_out
        nodes = search.nodes
        raw_trace = [(t, v, bound if search.timed_out else v) for t, v in search.trace]
        raw_trace.append((time.perf_counter() - t0, value, bound))
    else:
        from .cutting import BranchAndCut

        outcome = BranchAndCut(problem, deadline).run()
        labels, value, bound = outcome.labels, outcome.value, outcome.bound
        proven = outcome.proven
        nodes = outcome.nodes
        raw_trace = outcome.trace
    part = Partition.from_labels(c, list(labels))
    obj = problem.value(value)
    ub = problem.value(bound)
    return SolveResult(
        partition=part,
        objective=float(obj),
        upper_bound=float(ub),
        proven_optimal=proven,
        nodes_explored=nodes,
        wall_time=time.perf_counter() - t0,
        objective_exact=obj,
        upper_bound_exact=ub,
        method=engine,
        trace=tuple((t, float(problem.value(v)), float(problem.value(b))) for t, v, b in raw_trace),
    )


def solve_S(
    c: Component,
    D: float = DEFAULT_DENSITY_GATE,
    budget: float | None = None,
    method: Method = "auto",
) -> SolveResult:
    """Maximize S_i over partitions of ``c``.

    Components with density >= ``D`` (and lone nodes) stay one cluster with
    S_i = 0.  ``budget`` is a per-component time limit in seconds.
    """
    t0 = time.perf_counter()
    if c.n < 2:
        return _trivial(c, t0, gated=True)
    if c.density >= D:
        return _trivial(c, t0, gated=True)
    return _run(c, s_problem(c), budget, method, t0)


def solve_Q(
    c: Component,
    global_m: int,
    budget: float | None = None,
    weighted: bool = False,
    method: Method = "auto",
) -> SolveResult:
    """Maximize the component's additive share of network modularity.

    The share of a cluster set inside ``c`` is sum_c (e_cc - a_c^2) with edge
    fractions taken over the whole network, hence ``global_m``.  Clusters never
    need to span components: joining clusters that share no edge only
    subtracts 2 a_c a_c'.
    """
    t0 = time.perf_counter()
    if c.m == 0:
        return _trivial(c, t0, gated=False)
    return _run(c, q_problem(c, global_m, weighted), budget, method, t0)


def brute_force_best(
    c: Component,
    objective: Literal["s", "q"] = "s",
    max_n: int = 10,
    global_m: int | None = None,
    weighted: bool = False,
) -> SolveResult:
    """Exhaustive optimum over all Bell(n_i) partitions, ignoring the density gate.

    Scores come from per-cluster tallies (sizes, intra-cluster edges, degree
    sums), not from the pair weights the searches use, so this is an
    independent check on them.  Ties go to the lexicographically smallest
    restricted growth string.
    """
    t0 = time.perf_counter()
    if c.n > max_n:
        raise ValueError(f"component has {c.n} nodes; brute force is capped at {max_n}")
    objective = objective.lower()
    if c.n < 2 or c.m == 0:
        return _trivial(c, t0, gated=False)

    if objective == "s":
        pairs = c.n * c.n - c.n
        m_i = c.m

        def value_of(sizes, intra, inter, rgs):
            return sum(Fraction(mj, m_i) - Fraction(nj * nj - nj, pairs) for nj, mj in zip(sizes, intra))

    elif objective == "q":
        wts = c.local_weights if (weighted and c.local_weights is not None) else [1] * c.m
        gm = global_m if global_m is not None else sum(wts)
        if gm < sum(wts):
            raise ValueError("global_m is smaller than the component's edge total")
        deg = [0] * c.n
        for (u, v), w in zip(c.local_edges, wts):
            deg[u] += w
            deg[v] += w
        edges_w = list(zip(c.local_edges, wts))

        def value_of(sizes, intra, inter, rgs):
            k = len(sizes)
            win = [0] * k
            dsum = [0] * k
            for (u, v), w in edges_w:
                if rgs[u] == rgs[v]:
                    win[rgs[u]] += w
            for v, lab in enumerate(rgs):
                dsum[lab] += deg[v]
            return sum(Fraction(win[j], gm) - Fraction(dsum[j], 2 * gm) ** 2 for j in range(k))

    else:
        raise ValueError(f"objective must be 's' or 'q', got {objective!r}")

    rgs, best = brute_force_values(c.n, c.local_edges, value_of)
    return SolveResult(
        partition=Partition.from_labels(c, rgs),
        objective=float(best),
        upper_bound=float(best),
        proven_optimal=True,
        nodes_explored=bell(c.n),
        wall_time=time.perf_counter() - t0,
        objective_exact=best,
        upper_bound_exact=best,
        method="brute",
    )


def export_mip(c: Component, D: float = DEFAULT_DENSITY_GATE) -> str:
    """LP-format text of the slot-based S model for component ``c``."""
    return build_mip(c, D).to_lp(name=f"component_{c.id}")
