import math

import numpy as np
import pytest

from normcc import kernels
from normcc.graph import from_edges, generate_gnp, generate_planted
from normcc.metric import build_agreement_exact, build_metric_exact
from normcc.sampled import (CandidateSet, SketchConfig, agreement_sketch,
                            build_sampled, candidate_pairs, sampled_metric)


def cfg200(seed=0, **kw):
    return SketchConfig(epsilon=0.2, seed=seed, **kw)


def test_config_validation():
    with pytest.raises(ValueError):
        SketchConfig(epsilon=0.4)
    with pytest.raises(ValueError):
        SketchConfig(epsilon=0.1, beta=1.2)
    cfg = cfg200()
    assert cfg.tau_agree(500) == math.ceil(400 * math.log(500) / 0.04)
    assert cfg.tau_lp(500) == math.ceil(400 * math.log(500) / 0.2**5)


def test_sketch_equals_exact_when_probabilities_clamp():
    # every level probability is >= 1 at this scale, so decisions are exact
    for seed in range(3):
        g = generate_gnp(80, 0.3, seed=seed)
        sketch = agreement_sketch(g, cfg200(seed))
        exact = build_agreement_exact(g, beta=sketch.beta)
        assert sketch.h.indices.tolist() == exact.h.indices.tolist()
        assert sketch.mode == "sketch"


def test_candidates_path(path3):
    agree = agreement_sketch(path3, cfg200())
    cands = candidate_pairs(path3, agree, cfg200())
    assert list(zip(cands.us.tolist(), cands.vs.tolist())) == [(0, 2)]


def test_candidates_are_exact_two_hop_at_small_degree():
    g = generate_planted(60, 6, 0.9, 0.02, seed=4)
    cfg = cfg200(3)
    agree = agreement_sketch(g, cfg)
    assert float(agree.h.deg.max()) <= cfg.pivot_budget(g.n)  # clamped regime
    cands = candidate_pairs(g, agree, cfg)
    h = agree.h
    expect = set()
    for u in range(g.n):
        for w in h.neighbors(u).tolist():
            for v in h.neighbors(w).tolist():
                if v != u and not g.has_edge(u, v):
                    expect.add((min(u, v), max(u, v)))
    assert set(zip(cands.us.tolist(), cands.vs.tolist())) == expect


def test_candidates_disjoint_from_edges():
    g = generate_planted(120, 6, 0.85, 0.05, seed=1)
    sol, agree, cands = build_sampled(g, cfg200(2))
    assert not np.any(g.is_edge_batch(cands.us, cands.vs))
    assert np.all(cands.us < cands.vs)


def test_candidate_count_bound():
    g = generate_planted(200, 8, 0.9, 0.01, seed=5)
    for seed in range(3):
        cfg = cfg200(seed)
        agree = agreement_sketch(g, cfg)
        cands = candidate_pairs(g, agree, cfg)
        assert len(cands) <= 32 * g.m * math.log(g.n) / cfg.epsilon


def test_sampled_equals_clamped_exact_under_full_sampling():
    for seed in range(3):
        g = generate_planted(90, 6, 0.85, 0.03, seed=10 + seed)
        cfg = cfg200(seed)
        sol, agree, cands = build_sampled(g, cfg)
        exact = build_metric_exact(g, agree)
        xd = exact.to_dense()
        # apply the snapping by hand to the exact values
        eu, ev = g.edge_array()
        want = {}
        for u, v in zip(eu.tolist(), ev.tolist()):
            val = xd[u, v]
            want[(u, v)] = 0.0 if val <= cfg.epsilon else val
        for u, v in zip(cands.us.tolist(), cands.vs.tolist()):
            val = xd[u, v]
            want[(u, v)] = 1.0 if val >= 1 - cfg.epsilon else val
        got = dict(zip(zip(sol.us.tolist(), sol.vs.tolist()), sol.xs.tolist()))
        for pair, val in want.items():
            assert got.get(pair, 1.0) == pytest.approx(val, abs=1e-12)
        assert sol.triangle_slack == pytest.approx(3 * cfg.epsilon)


def test_sampled_determinism():
    g = generate_planted(150, 10, 0.9, 0.02, seed=3)
    a, _, _ = build_sampled(g, cfg200(7))
    b, _, _ = build_sampled(g, cfg200(7))
    assert a.to_json() == b.to_json()


def test_values_stay_in_unit_interval_under_forced_subsampling():
    g = generate_planted(256, 16, 0.9, 0.02, seed=6)
    for seed in range(5):
        cfg = SketchConfig(epsilon=0.2, seed=seed, tau_lp_override=8,
                           tau_agree_override=8)
        sol, agree, cands = build_sampled(g, cfg)
        assert np.all(sol.xs >= 0.0) and np.all(sol.xs <= 1.0)
        assert np.all(sol.us * sol.n + sol.vs
                      == np.sort(sol.us * sol.n + sol.vs))


def test_forced_subsampling_estimator_is_unbiased():
    # two 32-cliques overlapping in 16 vertices: the non-edge (0, 47) has
    # exact distance 1 - 16/32 = 0.5, making clamps immaterial
    edges = []
    a = list(range(32))
    b = list(range(16, 48))
    for blk in (a, b):
        edges += [(u, v) for i, u in enumerate(blk) for v in blk[i + 1:]]
    g = from_edges(48, edges)
    agree = build_agreement_exact(g, beta=0.5858)
    exact = build_metric_exact(g, agree)
    assert exact.query(0, 47) == pytest.approx(0.5)
    cands = CandidateSet(us=np.array([0], dtype=np.int32),
                         vs=np.array([47], dtype=np.int32))
    vals = []
    for seed in range(300):
        cfg = SketchConfig(epsilon=0.2, seed=seed, tau_lp_override=16)
        sol = sampled_metric(g, agree, cands, cfg)
        vals.append(sol.query(0, 47))
    assert 16 / 2**6 < 1.0        # level probability genuinely below one
    assert np.mean(vals) == pytest.approx(0.5, abs=0.05)


def test_forced_subsampling_sketch_still_mostly_correct():
    g = generate_planted(256, 16, 0.9, 0.02, seed=2)
    exact = build_agreement_exact(g, beta=0.5858)
    eu, ev = g.edge_array()
    deg = g.deg
    common = kernels.pair_common_counts(g.indptr, g.indices, eu, ev)
    symdiff = deg[eu] + deg[ev] - 2 * common
    m_uv = np.maximum(deg[eu], deg[ev])
    clear_keep = symdiff <= 0.5858 * m_uv / 2
    clear_drop = symdiff >= 2 * 0.5858 * m_uv
    agree = agreement_sketch(
        g, SketchConfig(epsilon=0.2, seed=3, tau_agree_override=48))
    hu, hv = agree.kept_edges()
    kept_keys = set((hu.astype(np.int64) * g.n + hv).tolist())
    keys = eu.astype(np.int64) * g.n + ev
    kept = np.array([k in kept_keys for k in keys.tolist()])
    total = int(clear_keep.sum() + clear_drop.sum())
    wrong = int((clear_keep & ~kept).sum() + (clear_drop & kept).sum())
    assert total > 0
    assert wrong / total < 0.1
