"""Norm-oblivious fractional solution built from the agreement subgraph.

The construction keeps a +edge uv when the two neighborhoods differ by at
most a beta fraction of the larger degree, then sets the pair distance to
1 - |N_H(u) ∩ N_H(v)| / max(d(u), d(v)) with degrees taken in the *input*
graph.  The result is a metric with values in [0, 1] whose fractional
disagreement vector is simultaneously near-optimal for every top-k norm,
without depending on k.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import IO

import numpy as np

from normcc import kernels
from normcc.graph import Graph, from_edges

# certified multiplicative gap of the construction at the default threshold
DEFAULT_BETA = 0.5858
TOPK_GAP = 12.66


@dataclass(frozen=True, eq=False)
class AgreementGraph:
    """The input graph together with its kept subgraph H (self-loops always
    kept) and the threshold that produced it."""

    base: Graph
    h: Graph
    beta: float
    mode: str = "exact"     # "exact" or "sketch"

    @property
    def d_h(self) -> np.ndarray:
        return self.h.deg

    def kept_edges(self) -> tuple[np.ndarray, np.ndarray]:
        return self.h.edge_array()


@dataclass(eq=False)
class FractionalSolution:
    """Sparse pair -> [0,1] assignment; pairs off the support sit at 1 and
    self pairs at 0.  triangle_slack is the additive tolerance epsilon in
    x_uv + x_uw + epsilon >= x_vw (0 for the exact construction)."""

    n: int
    us: np.ndarray              # int32, us[i] < vs[i], lexicographically sorted
    vs: np.ndarray
    xs: np.ndarray              # float64 in [0, 1]
    triangle_slack: float = 0.0
    _index: dict = field(default=None, repr=False)

    def pair_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return self.us, self.vs, self.xs

    @property
    def support_size(self) -> int:
        return len(self.xs)

    def _lookup(self) -> dict:
        if self._index is None:
            keys = self.us.astype(np.int64) * self.n + self.vs
            self._index = dict(zip(keys.tolist(), self.xs.tolist()))
        return self._index

    def query(self, u: int, v: int) -> float:
        """Stored value if present, else 1 (0 on the diagonal)."""
        if u == v:
            return 0.0
        a, b = (u, v) if u < v else (v, u)
        return self._lookup().get(a * self.n + b, 1.0)

    def to_dense(self) -> np.ndarray:
        """Full n x n matrix; intended for small instances and exhaustive
        property checks."""
        x = np.ones((self.n, self.n))
        np.fill_diagonal(x, 0.0)
        x[self.us, self.vs] = self.xs
        x[self.vs, self.us] = self.xs
        return x

    def to_json(self, stream: IO[str] | None = None) -> str:
        payload = {
            "pairs": [[int(u), int(v), float(x)]
                      for u, v, x in zip(self.us, self.vs, self.xs)],
            "slack": self.triangle_slack,
            "default": 1,
            "n": self.n,
        }
        text = json.dumps(payload, sort_keys=True)
        if stream is not None:
            stream.write(text)
        return text

    @staticmethod
    def from_json(text: str) -> "FractionalSolution":
        payload = json.loads(text)
        pairs = payload["pairs"]
        us = np.array([p[0] for p in pairs], dtype=np.int32)
        vs = np.array([p[1] for p in pairs], dtype=np.int32)
        xs = np.array([p[2] for p in pairs], dtype=np.float64)
        return make_solution(payload["n"], us, vs, xs, payload["slack"])


def make_solution(n: int, us, vs, xs, slack: float = 0.0) -> FractionalSolution:
    """Normalize pair orientation and ordering so identical inputs always
    produce an identical object; enforces the value and no-self-pair
    invariants."""
    us = np.asarray(us, dtype=np.int32)
    vs = np.asarray(vs, dtype=np.int32)
    xs = np.asarray(xs, dtype=np.float64)
    if np.any(us == vs):
        raise ValueError("self pairs are implicit (distance 0), never stored")
    if len(xs) and (xs.min() < 0.0 or xs.max() > 1.0):
        raise ValueError("pair values must lie in [0, 1]")
    lo = np.minimum(us, vs)
    hi = np.maximum(us, vs)
    order = np.lexsort((hi, lo))
    return FractionalSolution(n=n, us=lo[order], vs=hi[order], xs=xs[order],
                              triangle_slack=float(slack))


def build_agreement_exact(g: Graph, beta: float = DEFAULT_BETA) -> AgreementGraph:
    """Keep exactly the +edges with |N(u) Δ N(v)| <= beta * max(d(u), d(v))."""
    if not 0.0 < beta < 1.0:
        raise ValueError("beta must be in (0, 1)")
    us, vs = g.edge_array()
    common = kernels.pair_common_counts(g.indptr, g.indices, us, vs)
    deg = g.deg
    m_uv = np.maximum(deg[us], deg[vs])
    symdiff = deg[us] + deg[vs] - 2 * common
    keep = symdiff <= beta * m_uv
    h = from_edges(g.n, zip(us[keep].tolist(), vs[keep].tolist()))
    return AgreementGraph(base=g, h=h, beta=beta, mode="exact")


def _two_hop_nonedges(g: Graph, h: Graph) -> tuple[np.ndarray, np.ndarray]:
    """-pairs (u < v) with at least one common H-neighbor, found by expanding
    each vertex's 2-hop H-neighborhood.  Every other -pair has distance
    exactly 1; the explicit support can skip it."""
    out_u: list[np.ndarray] = []
    out_v: list[np.ndarray] = []
    for u in range(g.n):
        nbrs = h.neighbors(u)
        reach = np.unique(np.concatenate(
            [h.indices[h.indptr[w]:h.indptr[w + 1]] for w in nbrs]))
        reach = reach[reach > u]
        if len(reach) == 0:
            continue
        g_row = g.neighbors(u)
        pos = np.searchsorted(g_row, reach)
        pos[pos >= len(g_row)] = len(g_row) - 1
        adjacent = g_row[pos] == reach
        cand = reach[~adjacent]
        if len(cand):
            out_u.append(np.full(len(cand), u, dtype=np.int32))
            out_v.append(cand.astype(np.int32))
    if not out_u:
        empty = np.empty(0, dtype=np.int32)
        return empty, empty
    return np.concatenate(out_u), np.concatenate(out_v)


def build_metric_exact(g: Graph, agree: AgreementGraph) -> FractionalSolution:
    """Distances 1 - common_H / M_uv over E plus every -pair with a common
    H-neighbor; exact triangle inequality, zero slack."""
    h = agree.h
    eu, ev = g.edge_array()
    nu, nv = _two_hop_nonedges(g, h)
    us = np.concatenate([eu, nu])
    vs = np.concatenate([ev, nv])
    common = kernels.pair_common_counts(h.indptr, h.indices, us, vs)
    deg = g.deg
    m_uv = np.maximum(deg[us], deg[vs]).astype(np.float64)
    xs = 1.0 - common / m_uv
    return make_solution(g.n, us, vs, xs, slack=0.0)


def build_exact(g: Graph, beta: float = DEFAULT_BETA) -> FractionalSolution:
    """Agreement filtering plus metric assignment in one call."""
    return build_metric_exact(g, build_agreement_exact(g, beta))
