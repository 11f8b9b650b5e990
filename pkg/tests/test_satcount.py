"""Sparse counting, hashing, deciders, and the counting pipeline."""

import math

import numpy as np
import pytest

from fgcount.rng import RngStream, derive_stream
from fgcount.satcount import (
    FAIL,
    AugmentedFormula,
    CapExceeded,
    CnfFormula,
    Count,
    EnumerationDecider,
    SatSolveConfig,
    SatSolveParams,
    SparseXorSystem,
    XorRow,
    approx_count_cnf,
    augment,
    brute_force_count,
    conjoin,
    decide_pi_ks,
    empty_system,
    parse_dimacs,
    sample_hash,
    sat_solve,
    solution_codes,
    sparse_count,
    write_dimacs,
)


class CountingOracle:
    def __init__(self, fn):
        self.fn = fn
        self.calls = 0

    def __call__(self, f):
        self.calls += 1
        return self.fn(f)


def random_cnf(gen, n, m, k=3):
    clauses = []
    for _ in range(m):
        vs = gen.choice(n, size=min(k, n), replace=False) + 1
        signs = gen.integers(0, 2, size=vs.size)
        clauses.append(tuple(int(v) if s else -int(v) for v, s in zip(vs, signs)))
    return CnfFormula(n_vars=n, width_k=k, clauses=tuple(clauses))


# -- formula plumbing --------------------------------------------------------


def test_assign_simplifies_clauses_and_folds_rows():
    cnf = CnfFormula(3, 3, ((1, 2), (-1, 3), (-2,)))
    rows = SparseXorSystem(3, 2, (XorRow((1, 2), (1, 1), 1),))
    f = AugmentedFormula(cnf=cnf, xors=rows)
    g = f.assign(1, 1)
    # (x1 v x2) satisfied and dropped; (-x1 v x3) loses its first literal
    assert g.cnf.clauses == ((3,), (-2,))
    # x1 + x2 = 1 folds to x2 = 0
    assert g.xors.rows == (XorRow((2,), (1,), 0),)
    assert g.partial_assignment == {1: 1}
    assert g.first_free_variable() == 2


def test_assign_detects_unsatisfiable_markers():
    f = augment(CnfFormula(1, 1, ((1,),)))
    g = f.assign(1, 0)
    assert g.has_empty_clause()
    h = AugmentedFormula(
        cnf=CnfFormula(1, 1, ()),
        xors=SparseXorSystem(1, 1, (XorRow((1,), (1,), 1),)),
    ).assign(1, 0)
    assert h.has_violated_xor()


def test_trivial_rows_are_dropped_on_fold():
    f = AugmentedFormula(
        cnf=CnfFormula(2, 1, ()),
        xors=SparseXorSystem(2, 1, (XorRow((1,), (1,), 1),)),
    )
    assert f.assign(1, 1).xors.rows == ()


# -- sparse_count ------------------------------------------------------------


def oracle_dpll(f):
    return decide_pi_ks(f)


def test_sparse_count_unsatisfiable_is_zero():
    f = augment(CnfFormula(2, 3, ((1,), (-1,))))
    assert sparse_count(f, 10, oracle_dpll) == Count(0)


def test_sparse_count_no_variables_is_one():
    f = augment(CnfFormula(0, 1, ()))
    assert sparse_count(f, 1, oracle_dpll) == Count(1)


def test_sparse_count_budget_boundary():
    f = augment(CnfFormula(2, 3, ((1, 2),)))
    assert sparse_count(f, 3, oracle_dpll) == Count(3)
    assert sparse_count(f, 2, oracle_dpll) is FAIL


def test_sparse_count_matches_exhaustive_on_random_pairs():
    gen = np.random.default_rng(90)
    for _ in range(120):
        n = int(gen.integers(1, 13))
        m = int(gen.integers(0, 3 * n + 1))
        f = augment(random_cnf(gen, n, m))
        exact = brute_force_count(f)
        budget = int(gen.integers(0, 2**n + 2))
        result = sparse_count(f, budget, oracle_dpll)
        if exact <= budget:
            assert result == Count(exact)
        else:
            assert result is FAIL


def test_sparse_count_oracle_budget():
    gen = np.random.default_rng(91)
    for _ in range(40):
        n = int(gen.integers(2, 13))
        f = augment(random_cnf(gen, n, int(gen.integers(0, 2 * n))))
        exact = brute_force_count(f)
        budget = int(gen.integers(0, 2**n + 2))
        oracle = CountingOracle(oracle_dpll)
        sparse_count(f, budget, oracle)
        assert oracle.calls <= 8 * n * (min(budget, exact) + 1)


def test_sparse_count_aborts_the_whole_computation():
    # Once the budget is exhausted, no further oracle calls may happen.
    f = augment(CnfFormula(6, 1, ()))  # 64 solutions
    oracle = CountingOracle(oracle_dpll)
    assert sparse_count(f, 3, oracle) is FAIL
    burned = oracle.calls
    # counting 3+1 solutions at depth 6 plus pruning takes far fewer calls
    # than visiting the whole tree
    assert burned <= 8 * 6 * 4


# -- hashing -----------------------------------------------------------------


def test_sample_hash_support_sizes():
    rng = RngStream(1)
    system = sample_hash(4, 3, 20, rng)
    assert len(system.rows) == 3
    for row in system.rows:
        assert len(row.support) == 4
        assert len(set(row.support)) == 4
        assert all(1 <= v <= 20 for v in row.support)
        assert row.rhs == 0  # right-hand sides are drawn at conjoin time


def test_sample_hash_full_support_when_s_equals_n():
    system = sample_hash(5, 2, 5, RngStream(2))
    for row in system.rows:
        assert row.support == (1, 2, 3, 4, 5)


def test_sample_hash_rejects_bad_sizes():
    with pytest.raises(ValueError):
        sample_hash(6, 1, 5, RngStream(1))
    with pytest.raises(ValueError):
        sample_hash(2, 6, 5, RngStream(1))


def test_hash_hits_fixed_point_with_probability_two_to_minus_m():
    # For any fixed x, P(Ax = b) = 2^-m over the draw of (A, b).
    m, s, n = 3, 4, 20
    x_bits = np.random.default_rng(7).integers(0, 2, size=n)
    master = RngStream(33)
    hits = 0
    trials = 40_000
    for i in range(trials):
        system = sample_hash(s, m, n, derive_stream(master, f"A-{i}"))
        f = conjoin(CnfFormula(n, 3, ()), system, derive_stream(master, f"b-{i}"))
        ok = True
        for row in f.xors.rows:
            acc = 0
            for v, c in zip(row.support, row.coeffs):
                acc ^= c & int(x_bits[v - 1])
            if acc != row.rhs:
                ok = False
                break
        hits += ok
    p = hits / trials
    sigma = math.sqrt(2**-m * (1 - 2**-m) / trials)
    assert abs(p - 2**-m) <= 3 * sigma


def test_conjoin_zero_rows_preserves_solutions():
    gen = np.random.default_rng(8)
    f = random_cnf(gen, 8, 12)
    g = conjoin(f, empty_system(8), RngStream(3))
    assert brute_force_count(g) == brute_force_count(augment(f))


def test_conjoin_keeps_unsatisfiable_unsatisfiable():
    f = CnfFormula(4, 2, ((1,), (-1,)))
    system = sample_hash(2, 2, 4, RngStream(4))
    g = conjoin(f, system, RngStream(5))
    assert brute_force_count(g) == 0


def test_conjoin_deterministic_rhs():
    f = CnfFormula(6, 3, ())
    system = sample_hash(3, 4, 6, RngStream(6))
    a = conjoin(f, system, RngStream(7))
    b = conjoin(f, system, RngStream(7))
    assert a.xors.rows == b.xors.rows


def test_conjoin_dimension_mismatch():
    with pytest.raises(ValueError):
        conjoin(CnfFormula(4, 3, ()), sample_hash(2, 2, 5, RngStream(1)), RngStream(2))


# -- deciders ----------------------------------------------------------------


def test_decide_empty_formula_true():
    assert decide_pi_ks(augment(CnfFormula(0, 1, ()))) is True


def test_decide_contradiction_false():
    assert decide_pi_ks(augment(CnfFormula(1, 1, ((1,), (-1,))))) is False


def test_decide_respects_cap():
    with pytest.raises(CapExceeded):
        decide_pi_ks(augment(CnfFormula(40, 3, ())), free_var_cap=32)


def test_decide_agrees_with_enumeration_on_augmented_instances():
    # Random width-3 formulas near the satisfiability threshold plus four
    # XOR rows: both answers occur often.
    gen = np.random.default_rng(100)
    master = RngStream(101)
    answers = {True: 0, False: 0}
    for trial in range(200):
        n = 16
        f = random_cnf(gen, n, 60)
        system = sample_hash(
            int(gen.integers(2, n + 1)), 4, n, derive_stream(master, f"h{trial}")
        )
        aug = conjoin(f, system, derive_stream(master, f"b{trial}"))
        got = decide_pi_ks(aug)
        answers[got] += 1
        assert got == (brute_force_count(aug) > 0)
    assert answers[True] > 0 and answers[False] > 0


def test_enumeration_decider_matches_dpll_along_self_reduction():
    gen = np.random.default_rng(102)
    master = RngStream(103)
    n = 10
    f = random_cnf(gen, n, 18)
    for trial in range(10):
        system = sample_hash(n, 3, n, derive_stream(master, f"h{trial}"))
        aug = conjoin(f, system, derive_stream(master, f"b{trial}"))
        enum = EnumerationDecider(f)
        r1 = sparse_count(aug, 1 << n, enum)
        r2 = sparse_count(aug, 1 << n, oracle_dpll)
        assert r1 == r2
        assert r1 == Count(brute_force_count(aug))


def test_enumeration_decider_handles_non_prefix_assignments():
    gen = np.random.default_rng(104)
    f = random_cnf(gen, 8, 14)
    enum = EnumerationDecider(f)
    aug = augment(f).assign(5, 1).assign(2, 0)  # not a variable prefix
    assert enum(aug) == decide_pi_ks(aug)


def test_solution_codes_agree_with_count():
    gen = np.random.default_rng(105)
    for _ in range(20):
        f = random_cnf(gen, int(gen.integers(1, 11)), int(gen.integers(0, 25)))
        assert solution_codes(f).size == brute_force_count(augment(f))


# -- sat_solve ---------------------------------------------------------------


def test_params_formulas():
    p = SatSolveParams.for_instance(18, 0.3, 0.3)
    assert p.t == math.ceil(0.3 * 18 / 2 + 2 * math.log2(1 / 0.3))
    assert p.sparsity_s >= 40 * math.log2(2 / 0.3) ** 2 / 0.3
    with pytest.raises(ValueError):
        SatSolveParams.for_instance(18, 0.5, 0.3)  # delta must be < 1/3
    with pytest.raises(ValueError):
        SatSolveParams(delta=0.3, eps=0.3, t=5, sparsity_s=3)  # s below bound


def test_small_instances_brute_forced():
    # n / lg n = 8 / 3 <= 8 / delta for any delta < 1/3: stage-one exact.
    gen = np.random.default_rng(110)
    f = random_cnf(gen, 8, 20)
    params = SatSolveParams.for_instance(8, 0.3, 0.3)
    value = sat_solve(f, params, oracle_dpll, RngStream(1))
    assert value == brute_force_count(augment(f))


def test_unsat_returns_zero_through_budgeted_stage():
    # With the brute-force stage disabled, an unsatisfiable formula is
    # settled by the first oracle call of the budgeted self-reduction.
    f = CnfFormula(12, 2, ((1,), (-1,)))
    params = SatSolveParams.for_instance(12, 0.3, 0.3)
    cfg = SatSolveConfig(brute_force_constant=0.0)
    oracle = CountingOracle(oracle_dpll)
    assert sat_solve(f, params, oracle, RngStream(2), config=cfg) == 0
    assert oracle.calls == 1


def test_few_solutions_counted_exactly_through_budgeted_stage():
    f = CnfFormula(12, 1, tuple((v,) for v in range(1, 11)))  # forces x1..x10
    params = SatSolveParams.for_instance(12, 0.3, 0.3)
    cfg = SatSolveConfig(brute_force_constant=0.0)
    assert sat_solve(f, params, oracle_dpll, RngStream(3), config=cfg) == 4


def test_hashing_stage_estimates_within_tolerance():
    # Exercise the level loop on instances small enough to verify
    # exhaustively; at these parameters concentration is strong, so a large
    # majority of seeded runs must land within (1 +- eps).
    gen = np.random.default_rng(111)
    f = random_cnf(gen, 16, 28)
    exact = brute_force_count(augment(f))
    assert exact > 0
    params = SatSolveParams.for_instance(16, 0.3, 0.3)
    cfg = SatSolveConfig(brute_force_constant=0.0)
    good = 0
    trials = 15
    for t in range(trials):
        enum = EnumerationDecider(f)
        v = sat_solve(f, params, enum, derive_stream(RngStream(112), f"t{t}"), config=cfg)
        assert v is not None
        assert 0 <= v <= 2**16
        if abs(v - exact) <= 0.3 * exact:
            good += 1
    assert good >= trials - 2


def test_output_bounds_property():
    # Whatever the run does, the output is None or an integer in [0, 2^n].
    gen = np.random.default_rng(113)
    cfg = SatSolveConfig(brute_force_constant=0.0)
    for trial in range(25):
        n = int(gen.integers(8, 15))
        f = random_cnf(gen, n, int(gen.integers(0, 4 * n)))
        params = SatSolveParams.for_instance(n, 0.3, 0.3)
        v = sat_solve(f, params, EnumerationDecider(f),
                      derive_stream(RngStream(114), f"p{trial}"), config=cfg)
        if v is not None:
            assert 0 <= v <= 2**n


def test_all_levels_failing_returns_no_estimate():
    # An oracle that always answers "satisfiable" makes every hashed count
    # blow through its budget, so every level fails and there is no estimate.
    f = CnfFormula(12, 3, ())
    params = SatSolveParams.for_instance(12, 0.3, 0.3)
    cfg = SatSolveConfig(brute_force_constant=0.0)
    value = sat_solve(f, params, lambda g: True, RngStream(4), config=cfg)
    assert value is None


# -- approx_count_cnf --------------------------------------------------------


def test_wrapper_tiny_formula_exact():
    f = CnfFormula(2, 2, ((1, 2),))
    for seed in range(10):
        assert approx_count_cnf(f, 0.5, 0.3, RngStream(seed)) == 3


def test_wrapper_eps_below_two_to_minus_n_is_exact():
    gen = np.random.default_rng(120)
    f = random_cnf(gen, 10, 20)
    eps = 2.0**-11
    assert approx_count_cnf(f, eps, 0.3, RngStream(1)) == brute_force_count(augment(f))


def test_wrapper_validates_inputs():
    f = CnfFormula(2, 2, ())
    with pytest.raises(ValueError):
        approx_count_cnf(f, 0.0, 0.3, RngStream(1))
    with pytest.raises(ValueError):
        approx_count_cnf(f, 0.5, 1.0, RngStream(1))


def test_wrapper_medium_formula_within_tolerance():
    gen = np.random.default_rng(121)
    f = random_cnf(gen, 18, 42)
    exact = brute_force_count(augment(f))
    v = approx_count_cnf(f, 0.4, 0.3, RngStream(5))
    # stage-one exact path at this size
    assert v == exact


def test_wrapper_n20_random_formulas():
    gen = np.random.default_rng(122)
    for seed in range(5):
        f = random_cnf(gen, 20, 80)
        exact = brute_force_count(augment(f))
        v = approx_count_cnf(f, 0.4, 0.3, RngStream(seed))
        assert v is not None
        assert abs(v - exact) <= 0.4 * exact


# -- DIMACS ------------------------------------------------------------------


def test_dimacs_round_trip_plain():
    gen = np.random.default_rng(130)
    f = random_cnf(gen, 9, 15)
    g = parse_dimacs(write_dimacs(f))
    assert g.cnf.n_vars == f.n_vars
    assert g.cnf.clauses == f.clauses
    assert g.xors.rows == ()


def test_dimacs_round_trip_augmented():
    f = CnfFormula(5, 3, ((1, -2, 4),))
    rows = SparseXorSystem(5, 3, (XorRow((1, 3, 5), (1, 0, 1), 1),))
    aug = AugmentedFormula(cnf=f, xors=rows)
    g = parse_dimacs(write_dimacs(aug))
    assert g.cnf.clauses == f.clauses
    assert g.xors.rows == rows.rows


def test_dimacs_rejects_missing_header():
    with pytest.raises(ValueError):
        parse_dimacs("1 2 0\n")
