"""Agreement between clusterings and per-scenario summaries."""

from __future__ import annotations

import csv
import math
from collections import Counter, defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Iterable, Mapping, Sequence

import numpy as np

Z95 = 1.959963984540054


@dataclass(frozen=True)
class JiResult:
    ji: float
    N_i: int
    N_u: int

    @property
    def exact(self) -> Fraction:
        return Fraction(1) if self.N_u == 0 else Fraction(self.N_i, self.N_u)


def _pairs(counts: Iterable[int]) -> int:
    return sum(c * (c - 1) // 2 for c in counts)


def _as_mapping(clustering) -> Mapping[Hashable, Hashable]:
    if isinstance(clustering, Mapping):
        return clustering
    return dict(enumerate(clustering))


def jaccard(truth, computed) -> JiResult:
    """Jaccard index of the co-clustered node pairs of two clusterings.

    Each clustering is a sequence indexed by node or a node -> cluster
    mapping.  Pairs are counted from the contingency table, so nothing
    quadratic in n is built.  Two clusterings with no co-clustered pair at
    all score 1.
    """
    t = _as_mapping(truth)
    c = _as_mapping(computed)
    if t.keys() != c.keys():
        missing = set(t) ^ set(c)
        raise ValueError(f"clusterings cover different nodes ({len(missing)} differ)")
    table = Counter((t[v], c[v]) for v in t)
    n_i = _pairs(table.values())
    n_t = _pairs(Counter(t.values()).values())
    n_c = _pairs(Counter(c.values()).values())
    n_u = n_t + n_c - n_i
    return JiResult(ji=1.0 if n_u == 0 else n_i / n_u, N_i=n_i, N_u=n_u)


@dataclass(frozen=True)
class GroupSummary:
    scenario: int
    objective: str
    count: int
    mean: float
    half_width: float

    @property
    def ci_low(self) -> float:
        return self.mean - self.half_width

    @property
    def ci_high(self) -> float:
        return self.mean + self.half_width


@dataclass(frozen=True)
class ScenarioSummary:
    """Mean JI with a normal-approximation 95% interval per (scenario, objective)."""

    groups: tuple[GroupSummary, ...]

    def get(self, scenario: int, objective: str) -> GroupSummary:
        for grp in self.groups:
            if grp.scenario == scenario and grp.objective == objective:
                return grp
        raise KeyError((scenario, objective))

    @property
    def scenarios(self) -> list[int]:
        return sorted({grp.scenario for grp in self.groups})

    def gap(self, scenario: int, a: str = "s", b: str = "q") -> float:
        return self.get(scenario, a).mean - self.get(scenario, b).mean


def summarize(results: Iterable[tuple[int, str, float]]) -> ScenarioSummary:
    """Group ``(scenario, objective, ji)`` rows and summarize each group.

    Half-width is 1.96 * sd / sqrt(count) with the sample (ddof=1) sd.
    """
    grouped: dict[tuple[int, str], list[float]] = defaultdict(list)
    for scenario, objective, ji in results:
        grouped[(int(scenario), str(objective))].append(float(ji))
    if not grouped:
        raise ValueError("no results to summarize")
    out = []
    for (scenario, objective), vals in sorted(grouped.items()):
        if len(vals) < 2:
            raise ValueError(f"scenario {scenario}/{objective} has {len(vals)} instance(s); need at least 2")
        arr = np.asarray(vals)
        half = Z95 * float(arr.std(ddof=1)) / math.sqrt(len(arr))
        out.append(GroupSummary(scenario, objective, len(arr), float(arr.mean()), half))
    return ScenarioSummary(tuple(out))


def write_summary_csv(summary: ScenarioSummary, out) -> None:
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["scenario", "objective", "mean", "ci_low", "ci_high", "count"])
    for grp in summary.groups:
        w.writerow([grp.scenario, grp.objective, f"{grp.mean:.6f}", f"{grp.ci_low:.6f}", f"{grp.ci_high:.6f}", grp.count])


def read_assignment(source) -> dict[str, str]:
    """Two-column TSV (node, cluster); a header row is skipped if present."""
    out: dict[str, str] = {}
    for lineno, line in enumerate(source, 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected 'node cluster', got {line!r}")
        if lineno == 1 and parts[0] in ("node", "node_id"):
            continue
        if parts[0] in out:
            raise ValueError(f"line {lineno}: node {parts[0]!r} assigned twice")
        out[parts[0]] = parts[1]
    return out


def write_assignment(labels: Sequence[Hashable], out, names: Sequence[str] | None = None) -> None:
    out.write("node\tcluster\n")
    for v, c in enumerate(labels):
        out.write(f"{names[v] if names else v}\t{c}\n")
