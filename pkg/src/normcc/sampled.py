"""Near-linear construction of the fractional solution by sampling.

Three stages, all driven by counter-based hashing so results depend only on
(graph, config):

1. agreement sketch - per-edge keep/drop decisions from vertex samples at
   geometric degree levels; edges whose endpoints' neighborhoods clearly
   agree are kept, clear disagreements dropped, and decisions become exact
   whenever the level's sampling probability clamps to 1.
2. candidate pairs - the -pairs that may need an explicit value (distance
   below 1 - eps); found by expanding sampled pivots inside each kept
   neighborhood.
3. sampled metric - per-level estimates of the common-neighborhood ratio,
   clamped into [0, 1], with small +edge values snapped to 0 and large
   candidate values snapped to 1.  The result satisfies the triangle
   inequality with additive slack 3 eps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from normcc import kernels
from normcc.graph import Graph, from_edges
from normcc.hashing import (STREAM_AGREE, STREAM_LP, STREAM_PIVOT,
                            hash01_array)
from normcc.metric import (DEFAULT_BETA, AgreementGraph, FractionalSolution,
                           make_solution)


@dataclass(frozen=True)
class SketchConfig:
    """Sampling parameters.  The estimator sample budgets grow like
    400 ln(n)/eps^2 (agreement decisions) and 400 ln(n)/eps^5 (distance
    estimates); at desk scale both clamp every level to exact counting.
    The overrides exist so tests can force the sub-sampled code paths."""

    epsilon: float
    beta: float = DEFAULT_BETA
    seed: int = 0
    tau_agree_override: int | None = None
    tau_lp_override: int | None = None

    def __post_init__(self):
        if not 0.0 < self.epsilon < 1.0 / 3.0:
            raise ValueError("epsilon must be in (0, 1/3)")
        if not 0.0 < self.beta < 1.0:
            raise ValueError("beta must be in (0, 1)")

    def tau_agree(self, n: int) -> int:
        if self.tau_agree_override is not None:
            return self.tau_agree_override
        return math.ceil(400.0 * math.log(max(n, 2)) / self.epsilon**2)

    def tau_lp(self, n: int) -> int:
        if self.tau_lp_override is not None:
            return self.tau_lp_override
        return math.ceil(400.0 * math.log(max(n, 2)) / self.epsilon**5)

    def pivot_budget(self, n: int) -> float:
        return 8.0 * math.log(max(n, 2)) / self.epsilon


@dataclass(frozen=True, eq=False)
class CandidateSet:
    """-pairs eligible for an explicit distance; disjoint from E, no self
    pairs, stored lexicographically."""

    us: np.ndarray
    vs: np.ndarray

    def __len__(self) -> int:
        return len(self.us)

    def key_set(self, n: int) -> set[int]:
        return set((self.us.astype(np.int64) * n + self.vs).tolist())


def _sketch_level(m: int) -> int:
    """Level j with M in (2^(j-1), 2^j]."""
    return (m - 1).bit_length()


def _estimate_level(m: int) -> int:
    """Level j with M in [2^(j-1), 2^j)."""
    return int(m).bit_length()


def agreement_sketch(g: Graph, cfg: SketchConfig) -> AgreementGraph:
    """Keep/drop every +edge from sampled symmetric-difference counts.

    Edges bucketed by M_uv into geometric levels; level j samples vertices
    with probability min(tau / (beta 2^j), 1).  A clamped probability makes
    the decision identical to the exact agreement rule.
    """
    us, vs = g.edge_array()
    deg = g.deg
    m_uv = np.maximum(deg[us], deg[vs])
    tau = cfg.tau_agree(g.n)
    keep = np.zeros(len(us), dtype=bool)
    levels = np.array([_sketch_level(int(m)) for m in m_uv], dtype=np.int64)
    ids = np.arange(g.n, dtype=np.int64)
    for j in np.unique(levels):
        sel = levels == j
        prob = tau / (cfg.beta * float(2**j))
        if prob >= 1.0:
            common = kernels.pair_common_counts(g.indptr, g.indices,
                                                us[sel], vs[sel])
            symdiff = deg[us[sel]] + deg[vs[sel]] - 2 * common
            keep[sel] = symdiff <= cfg.beta * m_uv[sel]
            continue
        mask = hash01_array(cfg.seed, (STREAM_AGREE, int(j)), ids) < prob
        in_u = kernels.row_masked_counts(g.indptr, g.indices, mask)
        common = kernels.pair_common_counts_masked(g.indptr, g.indices,
                                                   us[sel], vs[sel], mask)
        x_uv = in_u[us[sel]] + in_u[vs[sel]] - 2 * common
        keep[sel] = x_uv <= (1.0 + cfg.epsilon / 2.0) * tau * m_uv[sel] / float(2**j)
    h = from_edges(g.n, zip(us[keep].tolist(), vs[keep].tolist()))
    return AgreementGraph(base=g, h=h, beta=cfg.beta, mode="sketch")


def candidate_pairs(g: Graph, agree: AgreementGraph,
                    cfg: SketchConfig) -> CandidateSet:
    """-pairs reachable through a sampled pivot in either endpoint's kept
    neighborhood.  Whole neighborhoods are used whenever the per-vertex
    budget covers them, which makes the set the exact 2-hop expansion on
    low-degree graphs."""
    h = agree.h
    budget = cfg.pivot_budget(g.n)
    keys: set[int] = set()
    n = g.n
    for u in range(n):
        nbrs = h.neighbors(u)
        d_h = len(nbrs)
        if d_h > budget:
            coin = hash01_array(cfg.seed, (STREAM_PIVOT, u),
                                nbrs.astype(np.int64))
            pivots = nbrs[coin < budget / d_h]
        else:
            pivots = nbrs
        if len(pivots) == 0:
            continue
        reach = np.unique(np.concatenate(
            [h.indices[h.indptr[w]:h.indptr[w + 1]] for w in pivots]))
        reach = reach[reach != u]
        if len(reach) == 0:
            continue
        g_row = g.neighbors(u)
        pos = np.searchsorted(g_row, reach)
        pos[pos >= len(g_row)] = len(g_row) - 1
        cand = reach[g_row[pos] != reach]
        for v in cand.tolist():
            a, b = (u, v) if u < v else (v, u)
            keys.add(a * n + b)
    ordered = np.array(sorted(keys), dtype=np.int64)
    return CandidateSet(us=(ordered // n).astype(np.int32),
                        vs=(ordered % n).astype(np.int32))


def sampled_metric(g: Graph, agree: AgreementGraph, cands: CandidateSet,
                   cfg: SketchConfig) -> FractionalSolution:
    """Estimate 1 - common_H/M over E plus the candidate pairs.

    Level j samples vertices with probability p = min(tau / 2^j, 1); the
    estimate is 1 - count/(p M), which reduces to the exact ratio whenever
    p clamps to 1.  Raw values are clamped into [0, 1] before the epsilon
    snapping;  candidate pairs snapped to 1 leave the support (1 is the
    default).  The resulting slack is 3 eps.
    """
    h = agree.h
    eu, ev = g.edge_array()
    us = np.concatenate([eu, cands.us])
    vs = np.concatenate([ev, cands.vs])
    is_edge = np.zeros(len(us), dtype=bool)
    is_edge[:len(eu)] = True
    deg = g.deg
    m_uv = np.maximum(deg[us], deg[vs]).astype(np.int64)
    tau = cfg.tau_lp(g.n)
    counts = np.zeros(len(us), dtype=np.float64)
    probs = np.zeros(len(us), dtype=np.float64)
    levels = np.array([_estimate_level(int(m)) for m in m_uv], dtype=np.int64)
    ids = np.arange(g.n, dtype=np.int64)
    for j in np.unique(levels):
        sel = levels == j
        prob = min(tau / float(2**j), 1.0)
        probs[sel] = prob
        if prob >= 1.0:
            counts[sel] = kernels.pair_common_counts(h.indptr, h.indices,
                                                     us[sel], vs[sel])
        else:
            mask = hash01_array(cfg.seed, (STREAM_LP, int(j)), ids) < prob
            counts[sel] = kernels.pair_common_counts_masked(
                h.indptr, h.indices, us[sel], vs[sel], mask)
    xs = np.clip(1.0 - counts / (probs * m_uv), 0.0, 1.0)
    xs[is_edge & (xs <= cfg.epsilon)] = 0.0
    xs[~is_edge & (xs >= 1.0 - cfg.epsilon)] = 1.0
    keep = is_edge | (xs < 1.0)
    return make_solution(g.n, us[keep], vs[keep], xs[keep],
                         slack=3.0 * cfg.epsilon)


def build_sampled(g: Graph, cfg: SketchConfig,
                  ) -> tuple[FractionalSolution, AgreementGraph, CandidateSet]:
    """Full sampled pipeline: sketch, candidates, metric."""
    agree = agreement_sketch(g, cfg)
    cands = candidate_pairs(g, agree, cfg)
    sol = sampled_metric(g, agree, cands, cfg)
    return sol, agree, cands
