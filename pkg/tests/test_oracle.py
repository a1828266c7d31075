import numpy as np
import pytest

from naive import (blocks_to_assignment, edge_set, naive_disagreements,
                   naive_partitions, naive_top_k)
from normcc.graph import generate_complete, generate_gnp
from normcc.norms import top_k
from normcc.oracle import (MAX_N, enumerate_partitions, opt_table, optimal,
                           partitions_matrix)

BELL = {1: 1, 2: 2, 3: 5, 4: 15, 5: 52, 6: 203, 7: 877, 8: 4140}


@pytest.mark.parametrize("n,count", sorted(BELL.items()))
def test_partition_counts(n, count):
    assert sum(1 for _ in enumerate_partitions(n)) == count
    assert len(partitions_matrix(n)) == count


def test_partitions_unique_and_canonical():
    seen = set(enumerate_partitions(4))
    assert len(seen) == 15
    for rgs in seen:
        assert rgs[0] == 0
        for i in range(1, 4):
            assert rgs[i] <= max(rgs[:i]) + 1


def test_cap_enforced():
    with pytest.raises(ValueError):
        list(enumerate_partitions(MAX_N + 1))
    with pytest.raises(ValueError):
        partitions_matrix(0)


def test_complete_graph_optimum():
    g = generate_complete(3)
    for spec in ("top:1", "top:3", "lp:2", "lp:inf"):
        assignment, value = optimal(g, spec)
        assert value == 0.0
        assert len(set(assignment.tolist())) == 1


def test_star_top_n_optimum(star6):
    assignment, value = optimal(star6, "top:6")
    assert value == 8.0
    # the returned witness really attains 8
    edges = edge_set(star6)
    assert sum(naive_disagreements(6, edges, assignment.tolist())) == 8
    # ... as does the center-plus-one-leaf clustering
    hand = [0, 0, 2, 3, 4, 5]
    assert sum(naive_disagreements(6, edges, hand)) == 8


def test_path_top3_optimum(path3):
    assignment, value = optimal(path3, "top:3")
    assert value == 2.0
    assert len(set(assignment.tolist())) == 1


def test_opt_table_path(path3):
    table = opt_table(path3)
    assert table.values.tolist() == [1.0, 2.0, 2.0]


def test_opt_table_complete_zero():
    assert opt_table(generate_complete(5)).values.tolist() == [0.0] * 5


def test_opt_table_monotone_and_attained():
    for seed in range(6):
        g = generate_gnp(6, 0.3 + 0.1 * seed, seed=seed)
        table = opt_table(g)
        vals = table.values
        assert np.all(np.diff(vals) >= 0)
        assert np.all(vals <= np.arange(1, 7) * vals[0] + 1e-9)
        edges = edge_set(g)
        for k in range(1, 7):
            witness = table.assignments[k - 1]
            cost = naive_disagreements(6, edges, witness.tolist())
            assert naive_top_k(cost, k) == vals[k - 1]


def test_opt_table_matches_naive_enumeration():
    for seed in range(4):
        g = generate_gnp(5, 0.4, seed=40 + seed)
        edges = edge_set(g)
        best = [float("inf")] * 5
        for blocks in naive_partitions(5):
            cost = naive_disagreements(5, edges,
                                       blocks_to_assignment(5, blocks))
            for k in range(1, 6):
                best[k - 1] = min(best[k - 1], naive_top_k(cost, k))
        assert opt_table(g).values.tolist() == best


def test_l1_optimum_is_twice_min_disagreeing_edges():
    g = generate_gnp(6, 0.5, seed=11)
    _, value = optimal(g, f"top:{g.n}")
    edges = edge_set(g)
    best = min(
        sum(naive_disagreements(6, edges, blocks_to_assignment(6, b)))
        for b in naive_partitions(6))
    assert value == best
    assert value % 2 == 0


def test_optimal_tie_break_first_in_enumeration_order():
    g = generate_gnp(4, 0.0, seed=0)          # no edges: singletons optimal
    assignment, value = optimal(g, "top:4")
    # several partitions reach 0; the all-singleton one appears later than
    # the first zero-cost partition only if none earlier reaches 0
    first = None
    edges = edge_set(g)
    for i, blocks in enumerate(naive_partitions(4)):
        cost = naive_top_k(
            naive_disagreements(4, edges, blocks_to_assignment(4, blocks)), 4)
        if cost == value:
            first = blocks
            break
    expect = blocks_to_assignment(4, first)
    norm = {c: i for i, c in enumerate(dict.fromkeys(expect))}
    got = {c: i for i, c in enumerate(dict.fromkeys(assignment.tolist()))}
    assert [norm[c] for c in expect] == [got[c] for c in assignment.tolist()]


def test_top_k_consistency_with_norms_module():
    g = generate_gnp(6, 0.6, seed=2)
    table = opt_table(g)
    for k in (1, 3, 6):
        _, value = optimal(g, f"top:{k}")
        assert value == table.values[k - 1]
        witness = table.assignments[k - 1]
        from normcc.norms import disagreements as pkg_disagreements
        assert top_k(pkg_disagreements(g, witness), k) == value
