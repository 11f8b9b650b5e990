"""Core finding: exact branches, core quality, query budgets."""

import math

import numpy as np
import pytest

from fgcount.edgecount import (
    Core,
    CoreClass,
    CoreParams,
    ExactCount,
    classify_core,
    find_core,
    halve,
)
from fgcount.oracles import matrix_oracles
from fgcount.rng import RngStream, derive_stream


def test_core_params_formula():
    p = CoreParams.compute(0.25, 4096)
    assert p.fcc == math.ceil(24 * math.log(4096) / 0.25)
    assert p.fcc >= 24 * math.log(4096) / 0.25


def test_find_core_rejects_contract_violations():
    adj = np.zeros((4, 4), dtype=bool)
    oracles = matrix_oracles(adj)
    with pytest.raises(ValueError):
        find_core(oracles, np.empty(0, dtype=np.int64), 0.5, RngStream(1))
    with pytest.raises(ValueError):
        find_core(oracles, np.arange(4), 0.0, RngStream(1))
    with pytest.raises(ValueError):
        find_core(oracles, np.arange(4), 1.0, RngStream(1))


def test_small_right_side_counts_exactly():
    # |X| = 3 < 24 ln 50, so the edges incident to X are enumerated outright.
    adj = np.zeros((47, 3), dtype=bool)
    adj[0, 0] = True
    oracles = matrix_oracles(adj)
    out = find_core(oracles, np.arange(3), 0.5, RngStream(7))
    assert isinstance(out, ExactCount)
    assert out.count == 1
    assert oracles.independence_calls == 0


def test_star_exhausts_left_side_and_counts_exactly():
    # One left vertex adjacent to all of X: the first located vertex empties
    # U_X, so the scan exhausts the ordering and counts |X| edges exactly.
    left, right = 300, 300
    adj = np.zeros((left, right), dtype=bool)
    adj[17, :] = True
    oracles = matrix_oracles(adj)
    out = find_core(oracles, np.arange(right), 0.5, RngStream(3))
    assert isinstance(out, ExactCount)
    assert out.count == right


def test_complete_bipartite_core_is_everything():
    # Every right vertex has full degree |U_X|, so it must be in any core;
    # membership is decided by a count that is deterministically fcc here.
    size = 1024
    adj = np.ones((size, size), dtype=bool)
    oracles = matrix_oracles(adj)
    out = find_core(oracles, np.arange(size), 0.25, RngStream(11))
    assert isinstance(out, Core)
    np.testing.assert_array_equal(np.sort(out.vertices), np.arange(size))
    assert out.sketch is not None
    assert out.sketch.sample.size == CoreParams.compute(0.25, 2048).fcc
    assert (out.sketch.neighbor_counts == out.sketch.sample.size).all()


def test_complete_bipartite_core_at_scale():
    # 4096 + 4096 vertices: the core must still be all of X on every seeded
    # run (full-degree vertices pass the membership count with certainty).
    size = 4096
    adj = np.ones((size, size), dtype=bool)
    for run in range(10):
        oracles = matrix_oracles(adj)
        out = find_core(
            oracles, np.arange(size), 0.25, RngStream(1200 + run)
        )
        assert isinstance(out, Core)
        assert out.vertices.size == size


def test_two_tier_degrees_separate_cleanly():
    # 50 right vertices of full degree and 974 of degree one: vertices above
    # xi |U_X| must be kept, vertices below xi |U_X| / 24 must be dropped.
    # Here both memberships are deterministic (counts are fcc versus <= 1).
    left = right = 1024
    heavy = 50
    adj = np.zeros((left, right), dtype=bool)
    adj[:, :heavy] = True
    adj[0, heavy:] = True
    oracles = matrix_oracles(adj)
    xi = 0.3
    out = find_core(oracles, np.arange(right), xi, RngStream(23))
    assert isinstance(out, Core)
    np.testing.assert_array_equal(np.sort(out.vertices), np.arange(heavy))
    ux = left  # every left vertex sees a heavy column
    degrees = adj.sum(axis=0)
    assert (degrees[out.vertices] >= xi * ux / 24).all()  # nothing light kept
    assert set(np.flatnonzero(degrees >= xi * ux)) <= set(out.vertices)


def test_independence_query_budget():
    gen = np.random.default_rng(2)
    left = right = 1024
    adj = gen.random((left, right)) < 0.01
    oracles = matrix_oracles(adj)
    xi = 0.3
    out = find_core(oracles, np.arange(right), xi, RngStream(5))
    assert isinstance(out, Core)
    fcc = CoreParams.compute(xi, left + right).fcc
    assert oracles.independence_calls <= fcc * math.ceil(math.log2(left + 1))


def test_find_core_deterministic_in_stream():
    adj = np.ones((512, 512), dtype=bool)
    a = find_core(matrix_oracles(adj), np.arange(512), 0.5, RngStream(9))
    b = find_core(matrix_oracles(adj), np.arange(512), 0.5, RngStream(9))
    assert isinstance(a, Core) and isinstance(b, Core)
    np.testing.assert_array_equal(a.vertices, b.vertices)
    np.testing.assert_array_equal(a.sketch.sample, b.sketch.sample)


def test_sketch_sample_lies_in_nonisolated_left():
    gen = np.random.default_rng(31)
    adj = gen.random((600, 600)) < 0.05
    oracles = matrix_oracles(adj)
    out = find_core(oracles, np.arange(600), 0.5, RngStream(13))
    if isinstance(out, Core):
        nonisolated = np.flatnonzero(adj.any(axis=1))
        assert set(out.sketch.sample) <= set(nonisolated)
        assert (out.sketch.neighbor_counts <= out.sketch.sample.size).all()


# -- classify_core -----------------------------------------------------------


def test_classify_empty_is_witness():
    assert classify_core(np.empty(0, dtype=np.int64), 0.7) is CoreClass.WITNESS


def test_classify_small_nonempty_is_unbalancer():
    # 24 / 0.5^2 = 96, so a singleton is far below the witness size
    assert classify_core(np.arange(1), 0.5) is CoreClass.UNBALANCER
    assert classify_core(np.arange(95), 0.5) is CoreClass.UNBALANCER


def test_classify_boundary_is_witness():
    assert classify_core(np.arange(96), 0.5) is CoreClass.WITNESS
    assert classify_core(np.arange(200), 0.5) is CoreClass.WITNESS


def test_classify_is_pure_and_total():
    gen = np.random.default_rng(4)
    for _ in range(200):
        size = int(gen.integers(0, 500))
        xi = float(gen.uniform(0.01, 0.99))
        s = np.arange(size)
        first = classify_core(s, xi)
        assert first is classify_core(s, xi)
        assert first in (CoreClass.WITNESS, CoreClass.UNBALANCER)
        # the two classes partition (size, xi) space
        assert (first is CoreClass.UNBALANCER) == (1 <= size < 24 / xi**2)


# -- halve -------------------------------------------------------------------


def test_halve_empty():
    out = halve(np.empty(0, dtype=np.int64), RngStream(1))
    assert out.size == 0


def test_halve_deterministic_for_fixed_stream():
    X = np.arange(1000)
    s = RngStream(77, b"h")
    np.testing.assert_array_equal(halve(X, s), halve(X, s))


def test_halve_mean_retention():
    X = np.arange(1000)
    master = RngStream(55)
    total = 0
    trials = 10_000
    for i in range(trials):
        total += halve(X, derive_stream(master, f"h-{i}")).size
    mean = total / trials
    assert abs(mean - 500.0) <= 5.0  # within 1% of half


def test_halve_preserves_membership_and_order():
    X = np.asarray([3, 1, 4, 1, 5, 9, 2, 6])
    out = halve(X, RngStream(8))
    assert set(out.tolist()) <= set(X.tolist())
