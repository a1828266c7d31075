"""Disagreement vectors and monotone symmetric norm evaluation.

A clustering is a total assignment vertex -> cluster id (any hashable ints;
ids need not be contiguous).  Disagreement vectors are real-valued
throughout so integral and fractional costs share one code path.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Union

import numpy as np

if TYPE_CHECKING:
    from normcc.graph import Graph
    from normcc.metric import FractionalSolution


def disagreements(g: "Graph", assignment: np.ndarray) -> np.ndarray:
    """Per-vertex disagreement counts of an integral clustering.

    cost(u) = #{v != u: uv in E, C(u) != C(v)} + #{v != u: uv not in E,
    C(u) = C(v)}.  Self-loops never disagree.
    """
    assignment = np.asarray(assignment)
    if len(assignment) != g.n:
        raise ValueError("assignment must cover every vertex")
    _, cid = np.unique(assignment, return_inverse=True)
    sizes = np.bincount(cid)
    row = np.repeat(np.arange(g.n, dtype=np.int64), np.diff(g.indptr))
    same = cid[row] == cid[g.indices]
    # same-cluster neighbor count includes the self-loop; subtract it
    same_excl = np.bincount(row[same], minlength=g.n) - 1
    deg = g.deg
    cut_plus = (deg - 1) - same_excl
    kept_minus = (sizes[cid] - 1) - same_excl
    return (cut_plus + kept_minus).astype(np.float64)


def fractional_disagreements(g: "Graph", sol: "FractionalSolution") -> np.ndarray:
    """cost_x(u) = sum of x over +edges at u plus sum of (1-x) over -edges.

    Pairs outside the explicit support have x = 1, so -edges contribute only
    through stored pairs and +edges default to 1 each.
    """
    cost = (g.deg - 1).astype(np.float64)  # all +edges at the default value 1
    us, vs, xs = sol.pair_arrays()
    if len(us) == 0:
        return cost
    is_edge = g.is_edge_batch(us, vs)
    w_edge = xs[is_edge] - 1.0
    w_non = 1.0 - xs[~is_edge]
    for idx, w in ((us[is_edge], w_edge), (vs[is_edge], w_edge),
                   (us[~is_edge], w_non), (vs[~is_edge], w_non)):
        cost += np.bincount(idx, weights=w, minlength=g.n)
    return cost


def top_k(vec: np.ndarray, k: int) -> float:
    """Sum of the k largest coordinates."""
    vec = np.asarray(vec, dtype=np.float64)
    if not 1 <= k <= len(vec):
        raise ValueError(f"k={k} out of range [1, {len(vec)}]")
    if k == len(vec):
        return float(vec.sum())
    part = np.partition(vec, len(vec) - k)
    return float(part[len(vec) - k:].sum())


def top_k_sweep(vec: np.ndarray) -> np.ndarray:
    """top_k for every k in one descending sort: sweep[k-1] = top_k(vec)."""
    return np.cumsum(np.sort(np.asarray(vec, dtype=np.float64))[::-1])


def lp_norm(vec: np.ndarray, p: float) -> float:
    """(sum v_i^p)^(1/p); p = inf gives the max, p = 1 the plain sum."""
    vec = np.asarray(vec, dtype=np.float64)
    if p == np.inf:
        return float(vec.max(initial=0.0))
    if p < 1:
        raise ValueError("p must be in [1, inf]")
    if p == 1:
        return float(vec.sum())
    return float((vec**p).sum() ** (1.0 / p))


def ordered_norm(weights: np.ndarray, vec: np.ndarray) -> float:
    """Dot product of a nonincreasing nonnegative weight vector with the
    descending-sorted input."""
    w = np.asarray(weights, dtype=np.float64)
    vec = np.asarray(vec, dtype=np.float64)
    if len(w) != len(vec):
        raise ValueError("weights and vector must have equal length")
    if np.any(w < 0) or np.any(np.diff(w) > 0):
        raise ValueError("weights must be nonincreasing and nonnegative")
    return float(w @ np.sort(vec)[::-1])


def topk_decomposition(weights: np.ndarray) -> np.ndarray:
    """w' with w'_i = w_i - w_{i+1} (w'_n = w_n): the ordered norm equals
    sum_k w'_k * top_k."""
    w = np.asarray(weights, dtype=np.float64)
    out = w.copy()
    out[:-1] -= w[1:]
    return out


@dataclass(frozen=True)
class NormSpec:
    """One of top-k, l_p, or an ordered-weight norm, parseable from the CLI
    strings top:K, lp:P, lp:inf, ordered:w1,w2,..."""

    kind: str                       # "top" | "lp" | "ordered"
    k: int = 0
    p: float = 0.0
    weights: tuple[float, ...] = ()

    @staticmethod
    def parse(text: str) -> "NormSpec":
        kind, _, rest = text.partition(":")
        if kind == "top":
            k = int(rest)
            if k < 1:
                raise ValueError("top:K needs K >= 1")
            return NormSpec(kind="top", k=k)
        if kind == "lp":
            p = np.inf if rest.strip() in ("inf", "Inf", "INF") else float(rest)
            if p < 1:
                raise ValueError("lp:P needs P >= 1")
            return NormSpec(kind="lp", p=p)
        if kind == "ordered":
            w = tuple(float(t) for t in rest.split(",") if t)
            if not w:
                raise ValueError("ordered norm needs weights")
            if any(x < 0 for x in w) or any(a < b for a, b in zip(w, w[1:])):
                raise ValueError("ordered weights must be nonincreasing, nonnegative")
            return NormSpec(kind="ordered", weights=w)
        raise ValueError(f"unknown norm spec {text!r}")

    def evaluate(self, vec: np.ndarray) -> float:
        if self.kind == "top":
            return top_k(vec, self.k)
        if self.kind == "lp":
            return lp_norm(vec, self.p)
        w = np.asarray(self.weights)
        if len(w) != len(vec):
            raise ValueError(
                f"ordered norm has {len(w)} weights but the vector has {len(vec)}")
        return ordered_norm(w, vec)

    def text(self) -> str:
        if self.kind == "top":
            return f"top:{self.k}"
        if self.kind == "lp":
            return "lp:inf" if self.p == np.inf else f"lp:{self.p:g}"
        return "ordered:" + ",".join(f"{w:g}" for w in self.weights)


NormLike = Union[str, NormSpec]


def as_spec(norm: NormLike) -> NormSpec:
    return norm if isinstance(norm, NormSpec) else NormSpec.parse(norm)
