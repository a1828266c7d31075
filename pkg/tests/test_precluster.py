import numpy as np
import pytest

from normcc.graph import generate_complete, generate_gnp, generate_planted
from normcc.norms import disagreements, top_k_sweep
from normcc.oracle import opt_table
from normcc.precluster import (DEFAULT_BETA, DEFAULT_LAMBDA, UnionFind,
                               component_density_check, precluster,
                               ratio_bound)
from normcc.sampled import SketchConfig


def test_defaults_satisfy_parameter_budget():
    assert 8 * DEFAULT_BETA + DEFAULT_LAMBDA <= 3 / 8 + 1e-12
    assert ratio_bound(DEFAULT_BETA, DEFAULT_LAMBDA) <= 359


def test_two_cliques():
    g = generate_planted(20, 2, 1.0, 0.0, seed=0)
    res = precluster(g)
    assert res.heavy.all()
    assert len(np.unique(res.assignment)) == 2
    for u, v in g.edges():
        assert res.assignment[u] == res.assignment[v]


def test_path_all_light_singletons(path3):
    # |N(a) Δ N(b)| = 1 > 0.0275 * 3, so the agreement graph is edgeless
    res = precluster(path3)
    assert not res.heavy.any()
    assert len(np.unique(res.assignment)) == 3
    cost = disagreements(path3, res.assignment)
    assert cost.sum() == 4
    sweep = top_k_sweep(cost)
    opt = opt_table(path3).values
    ratios = [c / o for c, o in zip(sweep, opt) if o > 0]
    assert max(ratios) == pytest.approx(2.0)
    assert max(ratios) <= 359


def test_single_vertex():
    g = generate_complete(1)
    res = precluster(g)
    assert res.assignment.tolist() == [0]
    assert component_density_check(g, res)["ok"]


def test_parameter_validation():
    g = generate_complete(4)
    with pytest.raises(ValueError):
        precluster(g, beta=0.05, lam=0.155)     # 8b + l > 3/8
    with pytest.raises(ValueError):
        precluster(g, beta=0.0, lam=0.1)
    with pytest.raises(ValueError):
        precluster(g, mode="fast")
    with pytest.raises(ValueError):
        precluster(g, mode="sketch")            # needs a config


def test_kept_edges_have_heavy_endpoint_and_components_match():
    for seed in range(4):
        g = generate_planted(60, 5, 0.9, 0.03, seed=seed)
        res = precluster(g)
        hu, hv = res.agree.kept_edges()
        # reachability over the surviving edges, computed independently
        adj = {u: [] for u in range(g.n)}
        for u, v in zip(hu.tolist(), hv.tolist()):
            if res.heavy[u] or res.heavy[v]:
                adj[u].append(v)
                adj[v].append(u)
        seen = [False] * g.n
        for s in range(g.n):
            if seen[s]:
                continue
            stack, comp = [s], []
            seen[s] = True
            while stack:
                u = stack.pop()
                comp.append(u)
                for v in adj[u]:
                    if not seen[v]:
                        seen[v] = True
                        stack.append(v)
            cids = {res.assignment[u] for u in comp}
            assert cids == {min(comp)}


def test_density_invariant_on_random_graphs():
    for seed in range(8):
        g = generate_gnp(80, 0.1 * (seed + 1), seed=seed)
        rep = component_density_check(g, precluster(g))
        assert rep["ok"], rep


def test_density_check_clique_component():
    g = generate_planted(12, 2, 1.0, 0.0, seed=1)
    rep = component_density_check(g, precluster(g))
    assert rep["ok"] and rep["checked"] == 12


def test_sketch_mode_matches_exact_at_desk_scale():
    g = generate_planted(80, 4, 0.95, 0.01, seed=6)
    exact = precluster(g, mode="exact")
    sketch = precluster(g, mode="sketch",
                        cfg=SketchConfig(epsilon=0.1, seed=3))
    assert np.array_equal(exact.assignment, sketch.assignment)


def test_union_find_basics():
    uf = UnionFind(5)
    uf.union(0, 1)
    uf.union(3, 4)
    uf.union(1, 3)
    assert len({uf.find(u) for u in (0, 1, 3, 4)}) == 1
    assert uf.find(2) == 2
