"""Approximate #CNF-SAT via sparse XOR hashing and a satisfiability oracle.

The pipeline reduces approximate counting to satisfiability queries on
*augmented* formulas: a width-k CNF conjoined with a sparse GF(2) linear
system.  Counting proceeds in two regimes:

* few solutions: count them exactly by self-reduction, branching on one
  variable at a time and pruning unsatisfiable branches through the oracle
  (``sparse_count``), giving up once a stated budget is exceeded;
* many solutions: thin the solution set by a factor ~2^m with random sparse
  XOR constraints, exactly count several independently thinned copies, and
  rescale the summed counts (``sat_solve``).

A single sparse XOR row does not concentrate the thinned count well, which
is why ``sat_solve`` sums 2^t independent hashed copies per level m; the
variance bound that makes this work is the subject of the hash-moment
tests.  All counts are arbitrary-precision integers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Optional, Union

import numpy as np

from .rng import RngStream, derive_stream
from .oracles import amplify

__all__ = [
    "CapExceeded",
    "CnfFormula",
    "XorRow",
    "SparseXorSystem",
    "AugmentedFormula",
    "augment",
    "empty_system",
    "Count",
    "FAIL",
    "SparseCountResult",
    "sparse_count",
    "sample_hash",
    "conjoin",
    "decide_pi_ks",
    "brute_force_count",
    "solution_codes",
    "EnumerationDecider",
    "SatSolveParams",
    "SatSolveConfig",
    "sat_solve",
    "approx_count_cnf",
    "parse_dimacs",
    "write_dimacs",
]


class CapExceeded(RuntimeError):
    """An enumeration-based routine was asked to exceed its configured size cap."""


# --------------------------------------------------------------------------
# Formula types.
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class CnfFormula:
    """A width-k CNF over variables 1..n_vars (signed-literal clauses)."""

    n_vars: int
    width_k: int
    clauses: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if self.n_vars < 0:
            raise ValueError("n_vars must be nonnegative")
        if self.width_k < 1:
            raise ValueError("width_k must be positive")
        clauses = tuple(tuple(int(l) for l in clause) for clause in self.clauses)
        object.__setattr__(self, "clauses", clauses)
        for clause in clauses:
            if len(clause) > self.width_k:
                raise ValueError(f"clause {clause} exceeds width {self.width_k}")
            for lit in clause:
                if lit == 0 or abs(lit) > self.n_vars:
                    raise ValueError(f"literal {lit} out of range for n={self.n_vars}")


@dataclass(frozen=True)
class XorRow:
    """One GF(2) equation: sum of coeffs[i] * x_support[i] = rhs."""

    support: tuple[int, ...]
    coeffs: tuple[int, ...]
    rhs: int

    def __post_init__(self) -> None:
        if len(self.support) != len(self.coeffs):
            raise ValueError("support and coefficients must align")
        if any(c not in (0, 1) for c in self.coeffs) or self.rhs not in (0, 1):
            raise ValueError("coefficients and rhs are GF(2) bits")
        if len(set(self.support)) != len(self.support):
            raise ValueError("support indices must be distinct")

    def effective_vars(self) -> tuple[int, ...]:
        return tuple(v for v, c in zip(self.support, self.coeffs) if c)

    def is_violated(self) -> bool:
        return not any(self.coeffs) and self.rhs == 1

    def is_trivial(self) -> bool:
        return not any(self.coeffs) and self.rhs == 0


@dataclass(frozen=True)
class SparseXorSystem:
    """An s-sparse GF(2) system over n_vars variables (row count m <= n)."""

    n_vars: int
    sparsity_s: int
    rows: tuple[XorRow, ...]

    def __post_init__(self) -> None:
        if self.sparsity_s < 1:
            raise ValueError("sparsity must be positive")
        if len(self.rows) > max(self.n_vars, 0):
            raise ValueError("row count must not exceed the variable count")
        for row in self.rows:
            if len(row.support) > self.sparsity_s:
                raise ValueError("row support exceeds sparsity bound")
            for v in row.support:
                if not 1 <= v <= self.n_vars:
                    raise ValueError(f"support variable {v} out of range")


def empty_system(n_vars: int) -> SparseXorSystem:
    return SparseXorSystem(n_vars=n_vars, sparsity_s=1, rows=())


@dataclass(frozen=True)
class AugmentedFormula:
    """CNF plus XOR system plus a partial assignment (for self-reduction).

    ``assign`` simplifies in place: satisfied clauses are dropped, falsified
    literals removed (an empty clause marks unsatisfiability), and assigned
    bits are folded into XOR right-hand sides (an all-zero row with rhs 1
    marks unsatisfiability).  Semantics: completions of the assignment
    satisfying all clauses and rows.
    """

    cnf: CnfFormula
    xors: SparseXorSystem
    partial_assignment: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.cnf.n_vars != self.xors.n_vars:
            raise ValueError("CNF and XOR system disagree on variable count")
        assignment = dict(self.partial_assignment)
        for v, b in assignment.items():
            if not 1 <= v <= self.cnf.n_vars or b not in (0, 1):
                raise ValueError(f"bad assignment entry {v}={b}")
        object.__setattr__(self, "partial_assignment", assignment)

    @property
    def n_vars(self) -> int:
        return self.cnf.n_vars

    def free_count(self) -> int:
        return self.cnf.n_vars - len(self.partial_assignment)

    def first_free_variable(self) -> Optional[int]:
        for v in range(1, self.cnf.n_vars + 1):
            if v not in self.partial_assignment:
                return v
        return None

    def has_empty_clause(self) -> bool:
        return any(len(c) == 0 for c in self.cnf.clauses)

    def has_violated_xor(self) -> bool:
        return any(row.is_violated() for row in self.xors.rows)

    def assign(self, var: int, value: int) -> "AugmentedFormula":
        if var in self.partial_assignment:
            raise ValueError(f"variable {var} already assigned")
        if value not in (0, 1):
            raise ValueError("assignment values are bits")

        new_clauses = []
        for clause in self.cnf.clauses:
            satisfied = False
            touched = False
            for lit in clause:
                if abs(lit) == var:
                    touched = True
                    if (lit > 0) == bool(value):
                        satisfied = True
                        break
            if satisfied:
                continue
            if touched:
                clause = tuple(l for l in clause if abs(l) != var)
            new_clauses.append(clause)

        new_rows = []
        for row in self.xors.rows:
            if var in row.support:
                idx = row.support.index(var)
                rhs = row.rhs ^ (row.coeffs[idx] & value)
                support = row.support[:idx] + row.support[idx + 1 :]
                coeffs = row.coeffs[:idx] + row.coeffs[idx + 1 :]
                row = _trusted_row(support, coeffs, rhs)
            if not row.is_trivial():
                new_rows.append(row)

        assignment = dict(self.partial_assignment)
        assignment[var] = value
        return _trusted_augmented(
            _trusted_cnf(self.cnf.n_vars, self.cnf.width_k, tuple(new_clauses)),
            _trusted_system(self.xors.n_vars, self.xors.sparsity_s, tuple(new_rows)),
            assignment,
        )


def augment(cnf: CnfFormula) -> AugmentedFormula:
    """Wrap a plain CNF as an augmented formula with no XOR rows."""
    return AugmentedFormula(cnf=cnf, xors=empty_system(cnf.n_vars))


# Validation in the dataclass constructors is O(formula) and dominates the
# self-reduction's per-node cost; these trusted constructors skip it for
# simplification outputs, whose invariants follow from the inputs'.


def _trusted_cnf(n_vars: int, width_k: int, clauses: tuple) -> CnfFormula:
    f = object.__new__(CnfFormula)
    object.__setattr__(f, "n_vars", n_vars)
    object.__setattr__(f, "width_k", width_k)
    object.__setattr__(f, "clauses", clauses)
    return f


def _trusted_row(support: tuple, coeffs: tuple, rhs: int) -> XorRow:
    r = object.__new__(XorRow)
    object.__setattr__(r, "support", support)
    object.__setattr__(r, "coeffs", coeffs)
    object.__setattr__(r, "rhs", rhs)
    return r


def _trusted_system(n_vars: int, sparsity_s: int, rows: tuple) -> SparseXorSystem:
    s = object.__new__(SparseXorSystem)
    object.__setattr__(s, "n_vars", n_vars)
    object.__setattr__(s, "sparsity_s", sparsity_s)
    object.__setattr__(s, "rows", rows)
    return s


def _trusted_augmented(
    cnf: CnfFormula, xors: SparseXorSystem, assignment: dict
) -> AugmentedFormula:
    f = object.__new__(AugmentedFormula)
    object.__setattr__(f, "cnf", cnf)
    object.__setattr__(f, "xors", xors)
    object.__setattr__(f, "partial_assignment", assignment)
    return f


# --------------------------------------------------------------------------
# Exact counting by self-reduction (budgeted).
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Count:
    value: int


class _Fail:
    __slots__ = ()

    def __repr__(self) -> str:  # pragma: no cover - cosmetic
        return "FAIL"


FAIL = _Fail()
SparseCountResult = Union[Count, _Fail]


class _BudgetExhausted(Exception):
    pass


def sparse_count(
    formula: AugmentedFormula,
    budget: int,
    oracle: Callable[[AugmentedFormula], bool],
) -> SparseCountResult:
    """Exact solution count if it is at most ``budget``, else FAIL.

    Branches on the lowest-index free variable; every node asks the oracle
    whether the current residual formula is satisfiable and prunes dead
    branches.  The moment the running number of solutions found exceeds the
    budget, the entire recursion unwinds and FAIL is returned (this is
    outcome-equivalent to checking partial sums at every branch node, and
    caps the work at budget+1 discovered solutions).  Oracle calls are
    bounded by 8n * (min(budget, count) + 1).
    """
    if budget < 0:
        raise ValueError("budget must be nonnegative")

    found = 0

    def recurse(f: AugmentedFormula) -> int:
        nonlocal found
        if not oracle(f):
            return 0
        var = f.first_free_variable()
        if var is None:
            found += 1
            if found > budget:
                raise _BudgetExhausted
            return 1
        return recurse(f.assign(var, 0)) + recurse(f.assign(var, 1))

    try:
        total = recurse(formula)
    except _BudgetExhausted:
        return FAIL
    return Count(total)


# --------------------------------------------------------------------------
# Sparse XOR hashing.
# --------------------------------------------------------------------------


def sample_hash(s: int, m: int, n: int, rng: RngStream) -> SparseXorSystem:
    """Random m x n GF(2) matrix whose rows have uniform size-s supports.

    Each row independently picks a uniform size-s subset of [n] as its
    support and uniform coefficient bits on it.  Right-hand sides are left
    zero here; ``conjoin`` draws them fresh (they must be independent of
    the matrix and of each other across hashed copies).
    """
    if not 1 <= s <= n:
        raise ValueError(f"support size s={s} must satisfy 1 <= s <= n={n}")
    if not 0 <= m <= n:
        raise ValueError(f"row count m={m} must satisfy 0 <= m <= n={n}")
    gen = rng.generator()
    rows = []
    for _ in range(m):
        support = np.sort(gen.choice(n, size=s, replace=False)) + 1
        coeffs = gen.integers(0, 2, size=s)
        rows.append(XorRow(tuple(int(v) for v in support), tuple(int(c) for c in coeffs), 0))
    return SparseXorSystem(n_vars=n, sparsity_s=s, rows=tuple(rows))


def conjoin(cnf: CnfFormula, system: SparseXorSystem, rng: RngStream) -> AugmentedFormula:
    """Attach ``system`` to ``cnf`` with a fresh uniform right-hand side."""
    if system.n_vars != cnf.n_vars:
        raise ValueError("dimension mismatch between formula and XOR system")
    gen = rng.generator()
    b = gen.integers(0, 2, size=len(system.rows))
    rows = tuple(
        XorRow(row.support, row.coeffs, int(bit)) for row, bit in zip(system.rows, b)
    )
    return AugmentedFormula(
        cnf=cnf,
        xors=SparseXorSystem(system.n_vars, system.sparsity_s, rows),
    )


# --------------------------------------------------------------------------
# Desk-scale deciders for augmented formulas.
# --------------------------------------------------------------------------


def _find_forced(f: AugmentedFormula) -> Optional[tuple[int, int]]:
    for clause in f.cnf.clauses:
        if len(clause) == 1:
            lit = clause[0]
            return abs(lit), 1 if lit > 0 else 0
    for row in f.xors.rows:
        eff = row.effective_vars()
        if len(eff) == 1:
            return eff[0], row.rhs
    return None


def decide_pi_ks(formula: AugmentedFormula, *, free_var_cap: int = 32) -> bool:
    """Satisfiability of CNF ∧ XOR by backtracking with unit propagation.

    Clause units and single-variable XOR rows are propagated to a fixpoint
    before branching on the lowest-index free variable.  A stand-in for the
    abstract satisfiability oracle at desk scale; refuses formulas with more
    than ``free_var_cap`` free variables.
    """
    if formula.free_count() > free_var_cap:
        raise CapExceeded(
            f"{formula.free_count()} free variables exceed the decision cap {free_var_cap}"
        )

    def search(f: AugmentedFormula) -> bool:
        while True:
            if f.has_empty_clause() or f.has_violated_xor():
                return False
            forced = _find_forced(f)
            if forced is None:
                break
            f = f.assign(*forced)
        var = f.first_free_variable()
        if var is None:
            return True
        return search(f.assign(var, 0)) or search(f.assign(var, 1))

    return search(formula)


def _clause_plan(f: AugmentedFormula):
    """Compile clauses/rows against the free-variable bit layout.

    Returns None if the formula is constant-false; otherwise
    (free_vars, clause_specs, row_specs) where clause specs are
    (positions, polarities) over free bits and row specs are (mask, rhs).
    """
    assignment = f.partial_assignment
    free = [v for v in range(1, f.n_vars + 1) if v not in assignment]
    pos_of = {v: i for i, v in enumerate(free)}

    clause_specs = []
    for clause in f.cnf.clauses:
        satisfied = False
        positions = []
        polarities = []
        for lit in clause:
            v = abs(lit)
            want = 1 if lit > 0 else 0
            if v in assignment:
                if assignment[v] == want:
                    satisfied = True
                    break
            else:
                positions.append(pos_of[v])
                polarities.append(want)
        if satisfied:
            continue
        if not positions:
            return None  # empty (falsified) clause
        clause_specs.append((np.asarray(positions), np.asarray(polarities, dtype=np.uint64)))

    row_specs = []
    for row in f.xors.rows:
        rhs = row.rhs
        mask = 0
        for v, c in zip(row.support, row.coeffs):
            if not c:
                continue
            if v in assignment:
                rhs ^= assignment[v]
            else:
                mask |= 1 << pos_of[v]
        if mask == 0:
            if rhs == 1:
                return None
            continue
        row_specs.append((np.uint64(mask), np.uint64(rhs)))

    return free, clause_specs, row_specs


def _satisfying_codes(f: AugmentedFormula, cap: int, chunk: int = 1 << 18):
    """Yield chunks of free-variable bit codes satisfying the formula."""
    plan = _clause_plan(f)
    if plan is None:
        return
    free, clause_specs, row_specs = plan
    width = len(free)
    if width > cap:
        raise CapExceeded(f"{width} free variables exceed the enumeration cap {cap}")
    total = 1 << width
    for start in range(0, total, chunk):
        stop = min(start + chunk, total)
        codes = np.arange(start, stop, dtype=np.uint64)
        ok = np.ones(codes.shape, dtype=bool)
        for positions, polarities in clause_specs:
            sat = np.zeros(codes.shape, dtype=bool)
            for p, want in zip(positions, polarities):
                sat |= ((codes >> np.uint64(p)) & np.uint64(1)) == want
            ok &= sat
        for mask, rhs in row_specs:
            parity = np.bitwise_count(codes & mask) & np.uint64(1)
            ok &= parity == rhs
        yield free, codes[ok]


def brute_force_count(f: AugmentedFormula, *, cap: int = 26) -> int:
    """Exact solution count by exhaustive enumeration over free variables."""
    total = 0
    for _, codes in _satisfying_codes(f, cap):
        total += int(codes.size)
    # A formula with zero free variables has exactly one candidate (the
    # empty completion); the generator above handles that via width 0.
    return total


def solution_codes(cnf: CnfFormula, *, cap: int = 26) -> np.ndarray:
    """All satisfying assignments of a plain CNF as n-bit codes (bit v-1 = x_v)."""
    out = []
    for free, codes in _satisfying_codes(augment(cnf), cap):
        # free variables are 1..n in order, so codes are already full codes
        out.append(codes)
    if not out:
        return np.empty(0, dtype=np.uint64)
    return np.concatenate(out)


class EnumerationDecider:
    """Exact oracle for descendants of one base CNF, backed by a solution table.

    Enumerates the base CNF's solutions once, then answers satisfiability of
    any formula obtained from it by conjoining XOR rows and assigning a
    prefix of the variables — exactly the query pattern of ``sparse_count``
    driven by ``sat_solve``.  Root queries (empty assignment) re-filter the
    table against the current XOR system; descendant queries reduce to a
    range lookup because prefix assignments are contiguous in bit-reversed
    order.  Assignments that are not variable prefixes fall back to a
    direct filter, so the decider is safe for ad-hoc use too.
    """

    def __init__(self, cnf: CnfFormula, *, cap: int = 26) -> None:
        self.cnf = cnf
        self.n = cnf.n_vars
        self.codes = solution_codes(cnf, cap=cap)
        self.calls = 0
        rev = np.zeros(self.codes.shape, dtype=np.uint64)
        for v in range(1, self.n + 1):
            bit = (self.codes >> np.uint64(v - 1)) & np.uint64(1)
            rev |= bit << np.uint64(self.n - v)
        self._rev_sorted = np.sort(rev)
        self._root_rows: Optional[tuple] = None
        self._root_rev: Optional[np.ndarray] = None

    def _filter_rows(self, rows: Iterable[XorRow], codes: np.ndarray) -> np.ndarray:
        ok = np.ones(codes.shape, dtype=bool)
        for row in rows:
            mask = 0
            for v, c in zip(row.support, row.coeffs):
                if c:
                    mask |= 1 << (v - 1)
            parity = np.bitwise_count(codes & np.uint64(mask)) & np.uint64(1)
            ok &= parity == np.uint64(row.rhs)
        return codes[ok]

    def _reverse(self, codes: np.ndarray) -> np.ndarray:
        rev = np.zeros(codes.shape, dtype=np.uint64)
        for v in range(1, self.n + 1):
            bit = (codes >> np.uint64(v - 1)) & np.uint64(1)
            rev |= bit << np.uint64(self.n - v)
        return np.sort(rev)

    def __call__(self, f: AugmentedFormula) -> bool:
        self.calls += 1
        assignment = f.partial_assignment
        if not assignment:
            rows = f.xors.rows
            if rows != self._root_rows:
                self._root_rows = rows
                self._root_rev = self._reverse(self._filter_rows(rows, self.codes))
            return self._root_rev.size > 0

        j = len(assignment)
        is_prefix = all(v in assignment for v in range(1, j + 1))
        if is_prefix and self._root_rev is not None:
            key = 0
            for v in range(1, j + 1):
                key |= assignment[v] << (self.n - v)
            width = self.n - j
            lo = np.searchsorted(self._root_rev, np.uint64(key), side="left")
            hi = np.searchsorted(self._root_rev, np.uint64(key + (1 << width)), side="left")
            return bool(hi > lo)

        # General fallback: filter the base table by the assignment bits and
        # evaluate the formula's own (folded) rows on the survivors.  The
        # survivors carry the true assigned bits, so folded and unfolded
        # rows agree on them.
        amask = 0
        abits = 0
        for v, b in assignment.items():
            amask |= 1 << (v - 1)
            abits |= b << (v - 1)
        survivors = self.codes[(self.codes & np.uint64(amask)) == np.uint64(abits)]
        survivors = self._filter_rows(f.xors.rows, survivors)
        return survivors.size > 0


# --------------------------------------------------------------------------
# The counting algorithm.
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class SatSolveParams:
    """Parameters of one counting run.

    ``t`` fixes the number 2^t of independently hashed copies summed per
    level, ceil(delta*n/2 + 2 lg(1/eps)); ``sparsity_s`` is the analysis
    level 40 lg(2/delta)^2 / delta.  At small n that bound exceeds n, in
    which case sampling proceeds at the densest admissible support s = n
    (a dense row is pairwise independent, which only improves the variance
    the bound is protecting).
    """

    delta: float
    eps: float
    t: int
    sparsity_s: int

    def __post_init__(self) -> None:
        if not 0.0 < self.delta < 1.0 / 3.0:
            raise ValueError("delta must lie in (0, 1/3)")
        if not 0.0 < self.eps < 1.0:
            raise ValueError("eps must lie in (0,1)")
        if self.t < 1:
            raise ValueError("t must be positive")
        required = 40.0 * math.log2(2.0 / self.delta) ** 2 / self.delta
        if self.sparsity_s < required:
            raise ValueError(
                f"sparsity {self.sparsity_s} below the analysis bound {required:.1f}"
            )

    @classmethod
    def for_instance(cls, n_vars: int, delta: float, eps: float) -> "SatSolveParams":
        if not 0.0 < delta < 1.0 / 3.0:
            raise ValueError("delta must lie in (0, 1/3)")
        if not 0.0 < eps < 1.0:
            raise ValueError("eps must lie in (0,1)")
        t = max(1, math.ceil(delta * n_vars / 2.0 + 2.0 * math.log2(1.0 / eps)))
        s = math.ceil(40.0 * math.log2(2.0 / delta) ** 2 / delta)
        return cls(delta=delta, eps=eps, t=t, sparsity_s=s)


@dataclass(frozen=True)
class SatSolveConfig:
    """Knobs that exist for tests and sensitivity studies.

    ``brute_force_constant`` is the 8 in the small-instance cutoff
    n / lg n <= 8/delta; setting it to 0 disables the brute-force branch so
    the hashing path can be exercised on instances small enough to verify
    exhaustively.  ``amplification_c`` is the C in the oracle's per-call
    failure budget eps^2 / (C n 2^(delta n / 3)).
    """

    brute_force_constant: float = 8.0
    brute_force_cap: int = 26
    amplification_c: float = 16.0
    max_t: int = 48  # refuse 2^t inner loops beyond this (plainly infeasible)


DEFAULT_SAT_CONFIG = SatSolveConfig()


def _power_budget(exponent: float) -> int:
    """floor(2^exponent) as an exact integer budget.

    Comparing integer counts against floor(2^e) is equivalent to comparing
    against the real 2^e, so the floor loses nothing.
    """
    if exponent > 900:
        raise CapExceeded(f"budget 2^{exponent:.1f} is beyond representable scale")
    return int(math.floor(2.0**exponent))


def sat_solve(
    formula: CnfFormula,
    params: SatSolveParams,
    oracle: Callable[[AugmentedFormula], bool],
    rng: RngStream,
    *,
    config: SatSolveConfig = DEFAULT_SAT_CONFIG,
) -> Optional[int]:
    """Count satisfying assignments within (1 ± eps), or report no estimate.

    Stages: (1) tiny instances are enumerated outright; (2) a budgeted
    self-reduction counts exactly when there are at most ~2^(t + delta n/2)
    solutions; (3) otherwise, for m = 0, 1, ... the solution set is thinned
    by independently sampled (s, m+t, n)-hashes, 2^t copies per level, each
    counted exactly under a shared budget — the first level whose copies
    all stay within budget returns 2^m times their sum.  Exhausting all
    levels yields None (the caller's "no estimate" outcome; the success
    guarantee makes this a probability <= 1/4 event).

    With probability at least 3/4 the returned value lies within
    (1 ± eps) of the true count, assuming a sound oracle.
    """
    n = formula.n_vars
    delta, eps, t = params.delta, params.eps, params.t

    # Small instances: solve outright.  (n/lg n is increasing for n >= 3.)
    if n <= 2 or (n / math.log2(n)) <= config.brute_force_constant / delta:
        return brute_force_count(augment(formula), cap=config.brute_force_cap)

    base_budget = _power_budget(t + delta * n / 2.0)
    result = sparse_count(augment(formula), base_budget, oracle)
    if result is not FAIL:
        return result.value

    if t > config.max_t:
        raise CapExceeded(f"2^{t} hashed copies per level is beyond desk scale")
    s_eff = min(params.sparsity_s, n)

    for m in range(0, n - t + 1):
        budget = _power_budget(t + delta * n / 2.0 + 2.0)
        copies = []
        failed = False
        for i in range(1 << t):
            system = sample_hash(s_eff, m + t, n, derive_stream(rng, f"hash-{m}-{i}"))
            hashed = conjoin(formula, system, derive_stream(rng, f"rhs-{m}-{i}"))
            res = sparse_count(hashed, budget, oracle)
            if res is FAIL:
                failed = True
                break
            copies.append(res.value)
            budget -= res.value
        if not failed:
            return (1 << m) * sum(copies)
    return None


def approx_count_cnf(
    formula: CnfFormula,
    eps: float,
    delta: float,
    rng: RngStream,
    *,
    config: SatSolveConfig = DEFAULT_SAT_CONFIG,
    oracle: Optional[Callable[[AugmentedFormula], bool]] = None,
) -> Optional[int]:
    """Top-level counter: brute-force decider, amplified, driving sat_solve.

    For eps below 2^-n an exact count is at least as cheap as estimating,
    so it is returned directly.  Otherwise the backtracking decider is
    majority-amplified to a per-call failure of eps^2 / (C n 2^(delta n/3))
    and the counting run executes at delta/3 (whose sparsity requirement
    40 lg(2/(delta/3))^2/(delta/3) equals the 120 lg(6/delta)^2/delta level
    this wrapper is specified at).  Success probability >= 2/3.
    """
    if not 0.0 < eps < 1.0:
        raise ValueError("eps must lie in (0,1)")
    if not 0.0 < delta < 1.0:
        raise ValueError("delta must lie in (0,1)")
    n = formula.n_vars
    if eps < 2.0 ** (-n):
        return brute_force_count(augment(formula), cap=config.brute_force_cap)

    params = SatSolveParams.for_instance(n, delta / 3.0, eps)
    base = oracle if oracle is not None else (
        lambda f: decide_pi_ks(f, free_var_cap=config.brute_force_cap)
    )
    target = eps**2 / (config.amplification_c * n * 2.0 ** (delta * n / 3.0))
    target = max(target, 1e-300)
    amplified = amplify(base, target)
    return sat_solve(formula, params, amplified, rng, config=config)


# --------------------------------------------------------------------------
# DIMACS with an XOR extension line.
# --------------------------------------------------------------------------


def parse_dimacs(text: str) -> AugmentedFormula:
    """Parse DIMACS CNF; lines "x <rhs> v:c v:c ... 0" add XOR rows."""
    n_vars = None
    clauses: list[tuple[int, ...]] = []
    rows: list[XorRow] = []
    pending: list[int] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) < 4 or parts[1] != "cnf":
                raise ValueError(f"bad problem line: {line!r}")
            n_vars = int(parts[2])
            continue
        if line.startswith("x"):
            parts = line.split()
            rhs = int(parts[1])
            support = []
            coeffs = []
            for token in parts[2:]:
                if token == "0":
                    break
                v, c = token.split(":")
                support.append(int(v))
                coeffs.append(int(c))
            rows.append(XorRow(tuple(support), tuple(coeffs), rhs))
            continue
        for token in line.split():
            lit = int(token)
            if lit == 0:
                clauses.append(tuple(pending))
                pending = []
            else:
                pending.append(lit)
    if pending:
        clauses.append(tuple(pending))
    if n_vars is None:
        raise ValueError("missing 'p cnf' header")
    width = max((len(c) for c in clauses), default=1)
    width = max(width, 1)
    cnf = CnfFormula(n_vars=n_vars, width_k=width, clauses=tuple(clauses))
    sparsity = max((len(r.support) for r in rows), default=1)
    system = SparseXorSystem(n_vars=n_vars, sparsity_s=max(sparsity, 1), rows=tuple(rows))
    return AugmentedFormula(cnf=cnf, xors=system)


def write_dimacs(f: Union[CnfFormula, AugmentedFormula]) -> str:
    """Serialize to DIMACS (plus x-lines when XOR rows are present)."""
    if isinstance(f, CnfFormula):
        f = augment(f)
    lines = [f"p cnf {f.cnf.n_vars} {len(f.cnf.clauses)}"]
    for clause in f.cnf.clauses:
        lines.append(" ".join([str(l) for l in clause] + ["0"]))
    for row in f.xors.rows:
        entries = [f"{v}:{c}" for v, c in zip(row.support, row.coeffs)]
        lines.append(" ".join(["x", str(row.rhs), *entries, "0"]))
    return "\n".join(lines) + "\n"
