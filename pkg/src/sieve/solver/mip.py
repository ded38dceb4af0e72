"""Slot-based mixed integer model of the S minimization, written as an LP file.

For one component with n nodes and m edges, maximizing S_i is the same as
minimizing

    Z' = sum_j n_j (n_j - 1) + R e,      R = (n^2 - n) / m,

over cluster sizes n_j and the count e of edges between clusters, and then
S_i = 1 - Z' / (n^2 - n).  Clusters 1..K (K = floor(n/2)) hold the
non-singleton clusters; cluster K+1 is a pool for nodes left on their own.
The quadratic n_k (n_k - 1) is linearized with slot binaries b_sk weighted
2 (s - 1): since the weights increase with s, a minimizer fills slots
1..n_k, and 2 * (0 + 1 + ... + (n_k - 1)) = n_k (n_k - 1).

Constraints:
  (1) sum_k x_jk = 1                          every node in one cluster
  (2) n_k = sum_j x_jk                        k = 1..K
  (3) sum_s b_sk = n_k                        k = 1..K
  (4) c_e >= x_uk - x_vk                      k = 1..K, e = (u, v)
  (5) c_e >= (x_u,K+1 + x_v,K+1) / 2          e = (u, v)

(4) is one-sided: if u and v sit in different clusters k, k' <= K the row for
k already forces c_e = 1, and a pooled endpoint is caught by (5) because c_e
is binary.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from fractions import Fraction
from typing import IO

from ..components import Component

_WRAP = 8  # terms per line; LP readers cap line length


@dataclass(frozen=True)
class MipModel:
    n: int
    m: int
    K: int
    S: int
    R: Fraction
    edges: tuple[tuple[int, int], ...]

    @property
    def pool(self) -> int:
        return self.K + 1

    def x(self, j: int, k: int) -> str:
        return f"x_{j + 1}_{k}"

    def b(self, s: int, k: int) -> str:
        return f"b_{s}_{k}"

    def c(self, e: int) -> str:
        return f"c_{e + 1}"

    def nk(self, k: int) -> str:
        return f"n_{k}"

    def x_vars(self) -> list[str]:
        return [self.x(j, k) for j in range(self.n) for k in range(1, self.pool + 1)]

    def b_vars(self) -> list[str]:
        return [self.b(s, k) for k in range(1, self.K + 1) for s in range(1, self.S + 1)]

    def c_vars(self) -> list[str]:
        return [self.c(e) for e in range(self.m)]

    def s_from_objective(self, z: float | Fraction):
        """S_i = 1 - Z' / (n^2 - n)."""
        pairs = self.n * self.n - self.n
        if isinstance(z, Fraction):
            return 1 - z / pairs
        return 1.0 - z / pairs

    def write_lp(self, out: IO[str], name: str = "sieve_s") -> None:
        w = out.write
        w(f"\\ {name}: minimize Z' for one component, S = 1 - Z'/{self.n * self.n - self.n}\n")
        w(f"\\ n={self.n} m={self.m} K={self.K} S={self.S} R={self.R}\n")
        w("Minimize\n")
        terms = []
        for k in range(1, self.K + 1):
            for s in range(2, self.S + 1):
                terms.append(f"{2 * (s - 1)} {self.b(s, k)}")
        r = repr(float(self.R))
        terms.extend(f"{r} {self.c(e)}" for e in range(self.m))
        _emit(out, " obj:", terms)
        w("Subject To\n")
        for j in range(self.n):
            _emit(out, f" assign_{j + 1}:", [self.x(j, k) for k in range(1, self.pool + 1)], "= 1")
        for k in range(1, self.K + 1):
            _emit(out, f" size_{k}:", [self.nk(k)] + [f"- {self.x(j, k)}" for j in range(self.n)], "= 0")
        for k in range(1, self.K + 1):
            _emit(out, f" slots_{k}:", [self.b(s, k) for s in range(1, self.S + 1)] + [f"- {self.nk(k)}"], "= 0")
        for e, (u, v) in enumerate(self.edges):
            for k in range(1, self.K + 1):
                w(f" cut_{e + 1}_{k}: {self.c(e)} - {self.x(u, k)} + {self.x(v, k)} >= 0\n")
            w(
                f" pool_{e + 1}: {self.c(e)} - 0.5 {self.x(u, self.pool)} - 0.5 {self.x(v, self.pool)} >= 0\n"
            )
        w("Bounds\n")
        for k in range(1, self.K + 1):
            w(f" 0 <= {self.nk(k)} <= {self.n}\n")
        w("Binary\n")
        for names in (self.x_vars(), self.b_vars(), self.c_vars()):
            for i in range(0, len(names), _WRAP):
                w(" " + " ".join(names[i : i + _WRAP]) + "\n")
        w("General\n")
        if self.K:
            w(" " + " ".join(self.nk(k) for k in range(1, self.K + 1)) + "\n")
        w("End\n")

    def to_lp(self, name: str = "sieve_s") -> str:
        buf = io.StringIO()
        self.write_lp(buf, name)
        return buf.getvalue()


def _emit(out: IO[str], head: str, terms: list[str], tail: str = "") -> None:
    parts = []
    for i, t in enumerate(terms):
        if i and not t.startswith("- "):
            t = "+ " + t
        parts.append(t)
    lines = [" ".join(parts[i : i + _WRAP]) for i in range(0, len(parts), _WRAP)] or ["0"]
    out.write(head + " " + lines[0])
    for line in lines[1:]:
        out.write("\n   " + line)
    out.write((" " + tail if tail else "") + "\n")


def build_mip(c: Component, D: float = 0.5) -> MipModel:
    """Model for component ``c``; gated components (density >= D) are refused."""
    if c.n < 2 or c.m < 1:
        raise ValueError("component needs at least one edge")
    if c.density >= D:
        raise ValueError(f"component {c.id} has density {c.density:.4f} >= D={D}; it stays one cluster")
    return MipModel(
        n=c.n,
        m=c.m,
        K=c.n // 2,
        S=c.n,
        R=Fraction(c.n * c.n - c.n, c.m),
        edges=c.local_edges,
    )
