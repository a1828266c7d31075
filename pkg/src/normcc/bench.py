"""Benchmark the compiled kernels against the NumPy fallback.

Runs each hot kernel on identical inputs from a generated instance and, when
both backends are importable, reports the speedup.  Invoked by the `bench`
CLI subcommand.
"""

from __future__ import annotations

import time

import numpy as np

from normcc import _kernels_py, kernels, metric
from normcc.graph import generate_planted
from normcc.rounding import CloseIndex, round_parallel

try:
    from normcc import _kernels  # type: ignore[attr-defined]
except ImportError:
    _kernels = None

_KERNEL_NAMES = ("intersect_size", "pair_common_counts",
                 "pair_common_counts_masked", "row_masked_counts", "l_values",
                 "ball_member_counts", "conflict_free", "assign_min_center")


def _swap_backend(mod) -> dict:
    old = {name: getattr(kernels, name) for name in _KERNEL_NAMES}
    for name in _KERNEL_NAMES:
        setattr(kernels, name, getattr(mod, name))
    return old


def _restore_backend(old: dict) -> None:
    for name, fn in old.items():
        setattr(kernels, name, fn)


def _time(fn, *args, repeat: int = 3) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def run_bench(n: int = 2000, seed: int = 1) -> dict:
    g = generate_planted(n, max(2, n // 12), 0.8, 4.0 / n, seed=seed)
    agree = metric.build_agreement_exact(g)
    sol = metric.build_metric_exact(g, agree)
    index = CloseIndex.build(sol)
    us, vs = g.edge_array()
    active = np.ones(n, dtype=bool)
    rng = np.random.default_rng(seed)
    member = rng.random(n) < 0.3

    cases = {
        "pair_common_counts": lambda k: k.pair_common_counts(
            g.indptr, g.indices, us, vs),
        "row_masked_counts": lambda k: k.row_masked_counts(
            g.indptr, g.indices, member),
        "l_values": lambda k: k.l_values(
            index.indptr, index.indices, index.vals, active, 0.1),
        "ball_member_counts": lambda k: k.ball_member_counts(
            index.indptr, index.indices, index.vals, member, 0.4),
        "assign_min_center": lambda k: k.assign_min_center(
            index.indptr, index.indices, index.vals, active, member, 0.4),
    }
    backends = {"python": _kernels_py}
    if _kernels is not None:
        backends["cython"] = _kernels

    results: dict = {"n": n, "m": g.m, "support": sol.support_size,
                     "kernels": {}}
    for name, case in cases.items():
        timings = {label: _time(case, mod) for label, mod in backends.items()}
        entry = {label: t for label, t in timings.items()}
        if "cython" in timings and timings["cython"] > 0:
            entry["speedup"] = timings["python"] / timings["cython"]
        results["kernels"][name] = entry

    # end to end: the full round-synchronous rounding under each backend
    entry = {}
    assignments = {}
    for label, mod in backends.items():
        old = _swap_backend(mod)
        try:
            t0 = time.perf_counter()
            assignments[label], _ = round_parallel(g, sol, 0.05, seed=seed)
            entry[label] = time.perf_counter() - t0
        finally:
            _restore_backend(old)
    if "cython" in entry and entry["cython"] > 0:
        entry["speedup"] = entry["python"] / entry["cython"]
        entry["identical_output"] = bool(
            np.array_equal(assignments["python"], assignments["cython"]))
    results["rounding_end_to_end"] = entry
    return results
