"""Oracle contracts: independence vs explicit edges, counters, amplification."""

import numpy as np
import pytest

from fgcount.oracles import (
    BipartiteOracles,
    VertexId,
    Side,
    amplified_independence,
    amplify,
    edge_set_oracles,
    matrix_oracles,
    repetitions_for,
)


def test_vertex_id_rejects_negative_index():
    with pytest.raises(ValueError):
        VertexId(Side.LEFT, -1)


def test_independence_matches_edge_enumeration_small_graphs():
    # For graphs up to 64 vertices, compare the oracle's answer against a
    # direct count of edges inside the queried subset, over many sampled
    # subsets per graph.
    gen = np.random.default_rng(123)
    for _ in range(20):
        left = int(gen.integers(1, 33))
        right = int(gen.integers(1, 33))
        adj = gen.random((left, right)) < 0.15
        oracles = matrix_oracles(adj)
        for _ in range(50):
            lsel = np.flatnonzero(gen.random(left) < 0.4)
            rsel = np.flatnonzero(gen.random(right) < 0.4)
            inside = int(adj[np.ix_(lsel, rsel)].sum())
            assert oracles.independence_query(lsel, rsel) == (inside == 0)


def test_adjacency_row_and_block_agree_with_matrix():
    gen = np.random.default_rng(5)
    adj = gen.random((40, 30)) < 0.2
    oracles = matrix_oracles(adj)
    rsel = np.arange(0, 30, 2)
    np.testing.assert_array_equal(oracles.adjacency_row(3, rsel), adj[3, rsel])
    lsel = np.asarray([0, 7, 21])
    np.testing.assert_array_equal(
        oracles.adjacency_block(lsel, rsel), adj[np.ix_(lsel, rsel)]
    )


def test_counters_count_each_probed_pair():
    adj = np.zeros((10, 10), dtype=bool)
    oracles = matrix_oracles(adj)
    oracles.independence_query([0, 1], [2])
    assert oracles.independence_calls == 1
    oracles.adjacency_query(0, 0)
    oracles.adjacency_row(1, np.arange(10))
    oracles.adjacency_block(np.arange(3), np.arange(4))
    assert oracles.adjacency_calls == 1 + 10 + 12


def test_counters_match_instrumented_wrapper_exactly():
    # An external wrapper that tallies raw probe volume must agree with the
    # oracle object's own counters.
    gen = np.random.default_rng(17)
    adj = gen.random((25, 25)) < 0.3
    tally = {"independence": 0, "adjacency": 0}

    def independence(left, right):
        tally["independence"] += 1
        return not adj[np.ix_(left, right)].any()

    def adjacency_row(u, right):
        tally["adjacency"] += len(right)
        return adj[u, right]

    def adjacency(u, v):
        tally["adjacency"] += 1
        return bool(adj[u, v])

    oracles = BipartiteOracles(25, 25, independence, adjacency, adjacency_row=adjacency_row)
    for _ in range(30):
        lsel = np.flatnonzero(gen.random(25) < 0.5)
        rsel = np.flatnonzero(gen.random(25) < 0.5)
        oracles.independence_query(lsel, rsel)
        if lsel.size and rsel.size:
            oracles.adjacency_block(lsel, rsel)
    assert oracles.independence_calls == tally["independence"]
    assert oracles.adjacency_calls == tally["adjacency"]


def test_edge_set_constructor():
    oracles = edge_set_oracles(3, 3, [(0, 1), (2, 2)])
    assert oracles.adjacency_query(0, 1)
    assert not oracles.adjacency_query(1, 1)
    assert oracles.count_edges_incident(np.arange(3), np.arange(3)) == 2


def test_out_of_range_subset_rejected():
    oracles = edge_set_oracles(3, 3, [])
    with pytest.raises(IndexError):
        oracles.independence_query([3], [0])


# -- amplification ----------------------------------------------------------


def test_amplify_deterministic_base_identity():
    decider = amplify(lambda x: x > 0, 0.001)
    assert decider.repetitions % 2 == 1
    for x in (-3, -1, 1, 5):
        assert decider(x) == (x > 0)


def test_amplify_high_target_degenerates_to_single_call():
    calls = []

    def base():
        calls.append(1)
        return True

    decider = amplify(base, 0.5)
    assert decider.repetitions == 1
    assert decider() is True
    assert len(calls) == 1


def test_repetition_count_formula():
    # smallest odd r >= 18 ln(2/target)
    assert repetitions_for(0.5) == 1
    assert repetitions_for(1 / 3) == 1
    r = repetitions_for(0.01)
    assert r % 2 == 1
    assert r >= 18 * np.log(200.0)
    assert r <= 18 * np.log(200.0) + 2


def test_amplify_rejects_bad_target():
    with pytest.raises(ValueError):
        amplify(lambda: True, 0.0)
    with pytest.raises(ValueError):
        amplify(lambda: True, 1.0)


def test_amplified_coin_failure_rate():
    # Base decider correct with probability exactly 2/3 (the worst case the
    # contract admits); after amplification to target 0.01, the empirical
    # failure rate over many trials must stay within binomial noise of the
    # target: <= 0.01 + 3 sqrt(0.01 * 0.99 / trials).
    gen = np.random.default_rng(404)
    truth = True

    def base():
        return truth if gen.random() < 2 / 3 else (not truth)

    decider = amplify(base, 0.01)
    trials = 10_000
    failures = sum(1 for _ in range(trials) if decider() is not truth)
    slack = 3 * np.sqrt(0.01 * 0.99 / trials)
    assert failures / trials <= 0.01 + slack


def test_amplified_independence_wrapper_counts_on_inner():
    gen = np.random.default_rng(3)
    adj = gen.random((30, 30)) < 0.1
    inner = matrix_oracles(adj)

    wrapped = amplified_independence(inner, 0.05)
    lsel, rsel = np.arange(5), np.arange(5)
    truth = inner.count_edges_incident(lsel, rsel) == 0
    before_adj = inner.adjacency_calls
    assert wrapped.independence_query(lsel, rsel) == truth
    # one outer query fans out into an odd number of inner queries
    assert wrapped.independence_calls == wrapped.decider.repetitions
    assert wrapped.independence_calls % 2 == 1
    # adjacency passes straight through
    wrapped.adjacency_query(0, 0)
    assert inner.adjacency_calls == before_adj + 1


def test_amplified_wrapper_fixes_a_noisy_decider():
    # A decider lying with probability 0.3 on a fixed query; the majority
    # wrapper at a small target should essentially always recover the truth.
    gen = np.random.default_rng(77)
    adj = np.zeros((8, 8), dtype=bool)
    adj[0, 0] = True

    def noisy_independence(left, right):
        truth = not adj[np.ix_(left, right)].any()
        return truth if gen.random() >= 0.3 else (not truth)

    oracles = BipartiteOracles(8, 8, noisy_independence, lambda u, v: bool(adj[u, v]))
    wrapped = amplified_independence(oracles, 1e-4)
    wrong = 0
    for _ in range(200):
        if wrapped.independence_query([0], [0]) is not False:
            wrong += 1
    assert wrong == 0
