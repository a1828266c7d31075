"""Ball-carving rounding of a fractional solution.

Two variants share the machinery:

* sequential - repeatedly pick the vertex maximizing L(w) = sum over the
  charge ball of (r - x), carve the radius-2/5 ball around it, and recurse.
  Requires an exact metric (zero slack) and gives cost_C(u) <= 5 cost_x(u)
  for every vertex.

* parallel - a round-synchronous simulation: all vertices whose L value
  reaches the current (1+eps) bucket become candidates, a Luby-style coin
  flip picks a conflict-free center set, and every vertex within 2/5 of a
  center is settled this round.  Tolerates triangle slack up to eps and
  gives cost_C(u) <= (5 + 55 eps) cost_x(u) deterministically; only the
  round count is randomized.

Ball membership only ever consults the explicit support: implicit pairs sit
at distance 1 > 2/5 and can never enter a ball.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from normcc import kernels
from normcc.graph import Graph
from normcc.hashing import STREAM_ROUND, hash01_array
from normcc.metric import FractionalSolution

CLUSTER_RADIUS = 2.0 / 5.0
SEQ_CHARGE_RADIUS = 1.0 / 5.0
SEQ_FACTOR = 5.0
MAX_EPSILON = 1.0 / 20.0


def parallel_factor(epsilon: float) -> float:
    return 5.0 + 55.0 * epsilon


def charge_radius(epsilon: float) -> float:
    return 1.0 / 5.0 - 2.0 * epsilon


@dataclass(eq=False)
class CloseIndex:
    """CSR over the support pairs with value <= 2/5, both directions; the
    only pairs that can ever fall inside a charge or cluster ball."""

    n: int
    indptr: np.ndarray
    indices: np.ndarray
    vals: np.ndarray

    @staticmethod
    def build(sol: FractionalSolution) -> "CloseIndex":
        us, vs, xs = sol.pair_arrays()
        keep = xs <= CLUSTER_RADIUS
        u, v, x = us[keep], vs[keep], xs[keep]
        src = np.concatenate([u, v]).astype(np.int64)
        dst = np.concatenate([v, u]).astype(np.int32)
        val = np.concatenate([x, x])
        order = np.lexsort((dst, src))
        src, dst, val = src[order], dst[order], val[order]
        indptr = np.zeros(sol.n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=sol.n), out=indptr[1:])
        return CloseIndex(n=sol.n, indptr=indptr, indices=dst, vals=val)

    def row_lengths(self) -> np.ndarray:
        return np.diff(self.indptr)

    def ball(self, active: np.ndarray, w: int, radius: float) -> np.ndarray:
        """Active vertices within the radius of w, including w itself."""
        lo, hi = self.indptr[w], self.indptr[w + 1]
        cols = self.indices[lo:hi]
        near = cols[(self.vals[lo:hi] <= radius) & active[cols]]
        return np.sort(np.append(near, w)) if active[w] else np.sort(near)


def l_value(sol: FractionalSolution, active: np.ndarray, w: int, r: float,
            index: CloseIndex | None = None) -> float:
    """L(w) = sum over active u with x_wu <= r of (r - x_wu); at least r
    because w sits in its own ball."""
    if not active[w]:
        raise ValueError("w must be unclustered")
    index = index if index is not None else CloseIndex.build(sol)
    lo, hi = index.indptr[w], index.indptr[w + 1]
    cols = index.indices[lo:hi]
    sel = (index.vals[lo:hi] <= r) & active[cols]
    return float(r + np.sum(r - index.vals[lo:hi][sel]))


@dataclass
class RoundLedger:
    """Execution trace of the round-synchronous rounding: per-round set
    sizes plus the candidate-scan work counter."""

    seed: int
    epsilon: float
    rounds: list[dict] = field(default_factory=list)
    scan_work: int = 0
    memory_exponent_delta: float = 0.25   # reported machine-memory exponent

    @property
    def num_rounds(self) -> int:
        return len(self.rounds)

    def record(self, **fields) -> None:
        self.rounds.append(fields)

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "epsilon": self.epsilon,
            "num_rounds": self.num_rounds,
            "scan_work": int(self.scan_work),
            "memory_exponent_delta": self.memory_exponent_delta,
            "rounds": self.rounds,
        }


def round_sequential(g: Graph, sol: FractionalSolution) -> np.ndarray:
    """Carve maximal-L balls one at a time; per-vertex 5-approximation
    against the fractional costs.  Refuses slack > 0, where that guarantee
    does not hold (use round_parallel)."""
    if sol.triangle_slack > 0.0:
        raise ValueError("sequential rounding needs an exact metric; "
                         "round_parallel handles slack > 0")
    index = CloseIndex.build(sol)
    n = g.n
    active = np.ones(n, dtype=bool)
    assignment = np.full(n, -1, dtype=np.int64)
    while active.any():
        l_vals = kernels.l_values(index.indptr, index.indices, index.vals,
                                  active, SEQ_CHARGE_RADIUS)
        w = int(np.argmax(l_vals))    # first maximum = smallest id
        cluster = index.ball(active, w, CLUSTER_RADIUS)
        assignment[cluster] = w
        active[cluster] = False
    return assignment


def round_parallel(g: Graph, sol: FractionalSolution, epsilon: float,
                   seed: int, record_assignments: bool = False,
                   ) -> tuple[np.ndarray, RoundLedger]:
    """Round-synchronous ball carving; every computation in a round reads
    the round-start snapshot.  Deterministic per-vertex (5 + 55 eps) bound;
    the coin flips only affect how many rounds it takes."""
    if not 0.0 < epsilon <= MAX_EPSILON:
        raise ValueError(f"epsilon must be in (0, {MAX_EPSILON}]")
    if sol.triangle_slack > epsilon + 1e-12:
        raise ValueError("triangle slack exceeds the rounding epsilon")
    r = charge_radius(epsilon)
    index = CloseIndex.build(sol)
    row_len = index.row_lengths()
    n = g.n
    ids = np.arange(n, dtype=np.int64)
    active = np.ones(n, dtype=bool)
    assignment = np.full(n, -1, dtype=np.int64)
    ledger = RoundLedger(seed=seed, epsilon=epsilon)
    t = 0
    log1e = math.log1p(epsilon)
    while active.any():
        t += 1
        if t > 10**6:
            raise RuntimeError("rounding failed to make progress")
        ledger.scan_work += int(row_len[active].sum()) + int(active.sum())
        l_vals = kernels.l_values(index.indptr, index.indices, index.vals,
                                  active, r)
        l_max = float(l_vals.max())
        # largest power r(1+eps)^j not exceeding the maximum; float-robust
        j = max(0, math.floor(math.log(l_max / r) / log1e))
        while r * (1.0 + epsilon) ** (j + 1) <= l_max:
            j += 1
        while j > 0 and r * (1.0 + epsilon) ** j > l_max:
            j -= 1
        l_thr = r * (1.0 + epsilon) ** j
        candidates = active & (l_vals >= l_thr)
        ball_counts = kernels.ball_member_counts(
            index.indptr, index.indices, index.vals, candidates, CLUSTER_RADIUS)
        delta = int(ball_counts.max())
        p = 1.0 / (2.0 * delta)
        coins = hash01_array(seed, (STREAM_ROUND, t), ids) < p
        sampled = candidates & coins
        centers = kernels.conflict_free(index.indptr, index.indices,
                                        index.vals, sampled, CLUSTER_RADIUS)
        entry = {
            "t": t,
            "active": int(active.sum()),
            "l_max_bucket": l_thr,
            "candidates": int(candidates.sum()),
            "sampled": int(sampled.sum()),
            "centers": int(centers.sum()),
            "settled": 0,
        }
        if not centers.any():
            # empty progress round: recorded, retried with fresh coins
            ledger.record(**entry)
            continue
        assigned = kernels.assign_min_center(index.indptr, index.indices,
                                             index.vals, active, centers,
                                             CLUSTER_RADIUS)
        settled = assigned >= 0
        entry["settled"] = int(settled.sum())
        if record_assignments:
            entry["assignments"] = [
                (int(u), int(assigned[u])) for u in np.flatnonzero(settled)]
        ledger.record(**entry)
        assignment[settled] = assigned[settled]
        active &= ~settled
    return assignment, ledger


def per_vertex_ratio(cost_c: np.ndarray, cost_x: np.ndarray) -> np.ndarray:
    """cost_C(u) / cost_x(u) with 0/0 -> 0; positive over zero flags a
    violation and comes out as inf."""
    out = np.zeros(len(cost_c))
    pos = cost_x > 0
    out[pos] = cost_c[pos] / cost_x[pos]
    bad = ~pos & (cost_c > 0)
    out[bad] = np.inf
    return out
