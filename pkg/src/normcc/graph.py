"""Immutable +edge graph with the self-loop convention.

Every vertex is its own neighbor, so d(u) = |N(u)| >= 1 and M_uv =
max(d(u), d(v)) is always positive.  Pairs absent from the edge set are
implicit -edges.  Adjacency is stored as a CSR structure with sorted rows,
which the kernels scan directly.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import IO, Iterable, Iterator, Sequence

import numpy as np

from normcc import kernels


class GraphFormatError(ValueError):
    """Raised for malformed edge-list input."""


@dataclass(frozen=True, eq=False)
class Graph:
    n: int
    indptr: np.ndarray          # int64, length n+1
    indices: np.ndarray         # int32, sorted within each row, self included
    labels: tuple[str, ...] | None = None
    _edge_keys: np.ndarray = field(default=None, repr=False)  # sorted u*n+v, u<v, no self

    @property
    def deg(self) -> np.ndarray:
        """d(u) including the self-loop."""
        return np.diff(self.indptr)

    @property
    def m(self) -> int:
        """Number of +edges excluding self-loops."""
        return (len(self.indices) - self.n) // 2

    def neighbors(self, u: int) -> np.ndarray:
        return self.indices[self.indptr[u]:self.indptr[u + 1]]

    def has_edge(self, u: int, v: int) -> bool:
        """True iff uv is a +edge (self pairs count: uu is always present)."""
        row = self.neighbors(u)
        i = np.searchsorted(row, v)
        return bool(i < len(row) and row[i] == v)

    def is_edge_batch(self, us: np.ndarray, vs: np.ndarray) -> np.ndarray:
        a = np.minimum(us, vs).astype(np.int64)
        b = np.maximum(us, vs).astype(np.int64)
        keys = a * self.n + b
        pos = np.searchsorted(self._edge_keys, keys)
        ok = pos < len(self._edge_keys)
        out = np.zeros(len(keys), dtype=bool)
        out[ok] = self._edge_keys[pos[ok]] == keys[ok]
        return out

    def edge_array(self) -> tuple[np.ndarray, np.ndarray]:
        """All +edges as (us, vs) with us < vs, self-loops excluded."""
        us = self._edge_keys // self.n
        vs = self._edge_keys % self.n
        return us.astype(np.int32), vs.astype(np.int32)

    def edges(self) -> Iterator[tuple[int, int]]:
        us, vs = self.edge_array()
        return zip(us.tolist(), vs.tolist())

    def label_of(self, u: int) -> str:
        return self.labels[u] if self.labels is not None else str(u)

    def all_labels(self) -> list[str]:
        return [self.label_of(u) for u in range(self.n)]


def from_edges(n: int, edges: Iterable[tuple[int, int]],
               labels: Sequence[str] | None = None) -> Graph:
    """Build a Graph from undirected edges over [0, n).

    Duplicates and input self-loops are merged; the n convention self-loops
    are always added; adjacency comes out symmetric and sorted.
    """
    if n < 1:
        raise GraphFormatError("empty graph")
    e = np.asarray(list(edges), dtype=np.int64)
    if e.size == 0:
        e = e.reshape(0, 2)
    a, b = e[:, 0], e[:, 1]
    if np.any((a < 0) | (a >= n) | (b < 0) | (b >= n)):
        raise GraphFormatError("vertex id out of range")
    keep = a != b
    a, b = a[keep], b[keep]
    lo, hi = np.minimum(a, b), np.maximum(a, b)
    edge_keys = np.unique(lo * n + hi)
    lo, hi = edge_keys // n, edge_keys % n
    diag = np.arange(n, dtype=np.int64)
    src = np.concatenate([lo, hi, diag])
    dst = np.concatenate([hi, lo, diag])
    order = np.lexsort((dst, src))
    src, dst = src[order], dst[order]
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
    g = Graph(n=n, indptr=indptr, indices=dst.astype(np.int32),
              labels=tuple(labels) if labels is not None else None)
    object.__setattr__(g, "_edge_keys", edge_keys)
    return g


def load_edge_list(stream: IO[str] | Iterable[str]) -> Graph:
    """Parse the text edge-list format: two whitespace-separated labels per
    line, `#` comment lines ignored.  Labels are interned to dense ids in
    first-appearance order."""
    ids: dict[str, int] = {}
    edges: list[tuple[int, int]] = []
    for lineno, raw in enumerate(stream, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        toks = line.split()
        if len(toks) != 2:
            raise GraphFormatError(
                f"line {lineno}: expected two tokens, got {len(toks)}")
        uv = []
        for t in toks:
            if t not in ids:
                ids[t] = len(ids)
            uv.append(ids[t])
        edges.append((uv[0], uv[1]))
    if not ids:
        raise GraphFormatError("empty graph")
    labels = sorted(ids, key=ids.get)
    return from_edges(len(ids), edges, labels=labels)


def common_neighbors(g: Graph, u: int, v: int) -> int:
    """|N(u) ∩ N(v)| (self-loops included on both sides)."""
    return int(kernels.intersect_size(g.neighbors(u), g.neighbors(v)))


def symdiff_size(g: Graph, u: int, v: int) -> int:
    """|N(u) Δ N(v)| = d(u) + d(v) - 2|N(u) ∩ N(v)|."""
    du = int(g.indptr[u + 1] - g.indptr[u])
    dv = int(g.indptr[v + 1] - g.indptr[v])
    return du + dv - 2 * common_neighbors(g, u, v)


# ---------------------------------------------------------------------------
# generators

def _pair_at(n: int, u: int, v: int) -> tuple[int, int]:
    return (u, v)


def _skip_sample_pairs(n: int, p: float, rng: random.Random,
                       emit) -> None:
    """Visit each unordered pair u<v independently with probability p using
    geometric skips; O(n + expected hits)."""
    if p <= 0.0:
        return
    u, v = 0, 1
    if p >= 1.0:
        for u in range(n - 1):
            for v in range(u + 1, n):
                emit(u, v)
        return
    log1p = math.log1p(-p)
    while u < n - 1:
        r = rng.random()
        skip = int(math.log1p(-r) / log1p) if r > 0.0 else 0
        v += skip
        while v >= n and u < n - 1:
            v = v - n + u + 2
            u += 1
        if u >= n - 1:
            break
        emit(u, v)
        v += 1
        while v >= n and u < n - 1:
            v = v - n + u + 2
            u += 1


def generate_star(n: int) -> Graph:
    if n < 1:
        raise GraphFormatError("n must be >= 1")
    return from_edges(n, ((0, i) for i in range(1, n)))


def generate_complete(n: int) -> Graph:
    if n < 1:
        raise GraphFormatError("n must be >= 1")
    return from_edges(n, ((u, v) for u in range(n) for v in range(u + 1, n)))


def generate_gnp(n: int, p: float, seed: int) -> Graph:
    if n < 1:
        raise GraphFormatError("n must be >= 1")
    if not 0.0 <= p <= 1.0:
        raise GraphFormatError("p must be in [0, 1]")
    # string seeds hash via sha512, stable across processes and platforms
    rng = random.Random(f"gnp:{n}:{p!r}:{seed}")
    edges: list[tuple[int, int]] = []
    _skip_sample_pairs(n, p, rng, lambda u, v: edges.append((u, v)))
    return from_edges(n, edges)


def generate_planted(n: int, clusters: int, p_in: float, p_out: float,
                     seed: int) -> Graph:
    """Balanced planted partition: contiguous blocks, Bernoulli(p_in) inside,
    Bernoulli(p_out) across."""
    if n < 1 or clusters < 1 or clusters > n:
        raise GraphFormatError("need 1 <= clusters <= n")
    for p in (p_in, p_out):
        if not 0.0 <= p <= 1.0:
            raise GraphFormatError("probabilities must be in [0, 1]")
    block = np.array([u * clusters // n for u in range(n)], dtype=np.int64)
    rng = random.Random(f"planted:{n}:{clusters}:{p_in!r}:{p_out!r}:{seed}")
    edges: list[tuple[int, int]] = []
    # intra pairs enumerated per block; the cross space is skip-sampled and
    # intra hits rejected so p_out=0 stays exact
    for c in range(clusters):
        members = np.flatnonzero(block == c)
        for i in range(len(members)):
            for j in range(i + 1, len(members)):
                if p_in >= 1.0 or rng.random() < p_in:
                    edges.append((int(members[i]), int(members[j])))

    def cross_emit(u: int, v: int) -> None:
        if block[u] != block[v]:
            edges.append((u, v))

    _skip_sample_pairs(n, p_out, rng, cross_emit)
    return from_edges(n, edges)


def generate(spec: str, seed: int = 0) -> Graph:
    """Parse a generator spec string: star:N, complete:N, gnp:N,P,
    planted:N,C,P_IN,P_OUT.  The seed applies to the random families."""
    kind, _, rest = spec.partition(":")
    args = [a for a in rest.split(",") if a] if rest else []
    try:
        if kind == "star":
            return generate_star(int(args[0]))
        if kind == "complete":
            return generate_complete(int(args[0]))
        if kind == "gnp":
            return generate_gnp(int(args[0]), float(args[1]), seed)
        if kind == "planted":
            return generate_planted(int(args[0]), int(args[1]),
                                    float(args[2]), float(args[3]), seed)
    except (IndexError, ValueError) as exc:
        raise GraphFormatError(f"bad generator spec {spec!r}: {exc}") from exc
    raise GraphFormatError(f"unknown generator kind {kind!r}")
