import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from naive import blocks_to_assignment, naive_partitions, naive_top_k
from normcc.graph import generate_complete, generate_gnp, generate_star
from normcc.metric import make_solution
from normcc.norms import (NormSpec, disagreements, fractional_disagreements,
                          lp_norm, ordered_norm, top_k, top_k_sweep,
                          topk_decomposition)


def test_disagreements_complete_single_cluster():
    g = generate_complete(3)
    assert disagreements(g, np.zeros(3)).tolist() == [0.0, 0.0, 0.0]


def test_disagreements_path_single_cluster(path3):
    # the one -pair ac is kept inside the cluster
    assert disagreements(path3, np.zeros(3)).tolist() == [1.0, 0.0, 1.0]


def test_disagreements_star_mixed(star6):
    assignment = np.array([0, 0, 2, 3, 4, 5])
    cost = disagreements(star6, assignment)
    assert cost[0] == 4 and cost[1] == 0
    assert cost[2:].tolist() == [1.0] * 4
    assert cost.sum() == 8


def test_disagreement_sums():
    for seed in range(5):
        g = generate_gnp(14, 0.4, seed=seed)
        nonedges = 14 * 13 // 2 - g.m
        assert disagreements(g, np.zeros(14)).sum() == 2 * nonedges
        assert disagreements(g, np.arange(14)).sum() == 2 * g.m


def test_fractional_zero_solution_complete():
    g = generate_complete(3)
    us, vs = g.edge_array()
    sol = make_solution(3, us, vs, np.zeros(len(us)))
    assert fractional_disagreements(g, sol).tolist() == [0.0, 0.0, 0.0]


def test_fractional_path_hand_values(path3):
    sol = make_solution(3, [0, 1, 0], [1, 2, 2], [1 / 3, 1 / 3, 1 / 2])
    cost = fractional_disagreements(path3, sol)
    assert np.allclose(cost, [5 / 6, 2 / 3, 5 / 6])


def test_fractional_all_ones_complete():
    g = generate_complete(3)
    us, vs = g.edge_array()
    sol = make_solution(3, us, vs, np.ones(len(us)))
    assert fractional_disagreements(g, sol).tolist() == [2.0, 2.0, 2.0]


def test_top_k_basics():
    assert top_k([3, 1, 2], 2) == 5
    assert top_k([3, 1, 2], 3) == 6
    assert top_k([4.0] * 7, 3) == 12.0
    with pytest.raises(ValueError):
        top_k([1, 2], 0)
    with pytest.raises(ValueError):
        top_k([1, 2], 3)


def test_lp_norm():
    assert lp_norm([3, 4], 2) == 5.0
    vec = [5, 1, 7, 2]
    assert lp_norm(vec, np.inf) == top_k(vec, 1)
    assert lp_norm(vec, 1) == top_k(vec, len(vec))
    with pytest.raises(ValueError):
        lp_norm(vec, 0.5)


def test_ordered_norm():
    assert ordered_norm([2, 1, 1], [1, 3, 2]) == 9.0
    assert ordered_norm([1, 0, 0], [1, 3, 2]) == top_k([1, 3, 2], 1)
    with pytest.raises(ValueError):
        ordered_norm([1, 2, 3], [1, 1, 1])
    with pytest.raises(ValueError):
        ordered_norm([1, -1, -1], [1, 1, 1])


def test_ordered_decomposition_example():
    w = np.array([2.0, 1.0, 1.0])
    vec = [1, 3, 2]
    wk = topk_decomposition(w)
    total = sum(wk[k - 1] * top_k(vec, k) for k in range(1, 4))
    assert total == ordered_norm(w, vec) == 9.0


@settings(max_examples=80, deadline=None)
@given(st.lists(st.floats(0, 100), min_size=1, max_size=32), st.data())
def test_topk_properties(vec, data):
    n = len(vec)
    k = data.draw(st.integers(1, n))
    assert top_k(vec, k) == pytest.approx(naive_top_k(vec, k))
    if k < n:
        assert top_k(vec, k) <= top_k(vec, k + 1) + 1e-9
    assert top_k(vec, k) <= k * top_k(vec, 1) + 1e-9
    assert top_k(np.array(vec) * 2.5, k) == pytest.approx(2.5 * top_k(vec, k))
    sweep = top_k_sweep(vec)
    assert sweep[k - 1] == pytest.approx(top_k(vec, k))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.floats(0, 50), min_size=1, max_size=24), st.data())
def test_ordered_equals_topk_combination(vec, data):
    n = len(vec)
    w = np.sort(np.array(
        data.draw(st.lists(st.floats(0, 10), min_size=n, max_size=n))))[::-1]
    wk = topk_decomposition(w)
    total = sum(wk[k - 1] * top_k(vec, k) for k in range(1, n + 1))
    assert ordered_norm(w, vec) == pytest.approx(total, abs=1e-8)


def test_simultaneous_bound_transfers_to_ordered_norms():
    # if one vector dominates another within rho on every top-k, the same
    # rho bound holds for every ordered norm
    g = generate_star(6)
    parts = list(naive_partitions(6))
    from naive import edge_set, naive_disagreements
    edges = edge_set(g)
    c1 = np.array(naive_disagreements(6, edges,
                                      blocks_to_assignment(6, parts[3])))
    c2 = np.array(naive_disagreements(6, edges,
                                      blocks_to_assignment(6, parts[11])))
    s1, s2 = top_k_sweep(c1), top_k_sweep(c2)
    rho = max(a / b for a, b in zip(s1, s2) if b > 0)
    rng = np.random.default_rng(5)
    for _ in range(50):
        w = np.sort(rng.random(6))[::-1]
        assert ordered_norm(w, c1) <= rho * ordered_norm(w, c2) + 1e-9


def test_normspec_parsing():
    assert NormSpec.parse("top:2").evaluate([3, 1, 2]) == 5
    assert NormSpec.parse("lp:inf").evaluate([3, 1, 2]) == 3
    assert NormSpec.parse("lp:2").text() == "lp:2"
    spec = NormSpec.parse("ordered:2,1,1")
    assert spec.evaluate([1, 3, 2]) == 9
    assert spec.text() == "ordered:2,1,1"
    with pytest.raises(ValueError):
        NormSpec.parse("ordered:1,2")
    with pytest.raises(ValueError):
        NormSpec.parse("width:3")
    with pytest.raises(ValueError):
        NormSpec.parse("top:0")
    with pytest.raises(ValueError):
        NormSpec.parse("ordered:1,1").evaluate([1, 2, 3])
